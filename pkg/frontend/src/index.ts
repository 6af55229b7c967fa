export * from "./types.js";
export { GatewayClient, GatewayError, isConflict, type FetchLike } from "./client.js";
export { SessionStore, type StoredProposal, type EditMotion } from "./store.js";
export { ConsoleApp, type PanelScenes } from "./app.js";
export { renderSvg, type SvgNode } from "./svg.js";
export { linearScale, extent, padded, type LinearScale } from "./scale.js";
export * from "./color.js";
export {
  buildOverviewScene,
  type OverviewScene,
  type OverviewOptions,
  type OverviewProposalMark,
} from "./panels/overview.js";
export { buildPcpScene, dragDelta, type PcpScene } from "./panels/pcp.js";
export { buildNeighborScene, MIN_NEIGHBORS, type NeighborScene } from "./panels/neighbors.js";
export {
  buildProgressScene,
  verifyButtonState,
  UNIT_VERIFY_COST,
  type ProgressScene,
  type VerifyButton,
} from "./panels/progress.js";
export { buildControlScene, STRATEGIES, type ControlScene } from "./panels/control.js";
