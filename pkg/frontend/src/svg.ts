/** Scene nodes and their serialization to an SVG string.
 *
 * Panels build nodes; tests and hosts read either the structured scene or
 * the serialized markup.  Numbers are written at full precision so what
 * the gateway sent is what the document contains.
 */

export type SvgNode =
  | {
      kind: "circle";
      cx: number;
      cy: number;
      r: number;
      fill?: string;
      stroke?: string;
      strokeWidth?: number;
      dataId?: string;
      className?: string;
    }
  | {
      kind: "rect";
      x: number;
      y: number;
      width: number;
      height: number;
      fill?: string;
      stroke?: string;
      opacity?: number;
      dataId?: string;
      className?: string;
    }
  | {
      kind: "line";
      x1: number;
      y1: number;
      x2: number;
      y2: number;
      stroke?: string;
      strokeWidth?: number;
      dashed?: boolean;
      className?: string;
    }
  | {
      kind: "polyline";
      points: [number, number][];
      stroke?: string;
      strokeWidth?: number;
      dashed?: boolean;
      fill?: string;
      dataId?: string;
      className?: string;
    }
  | {
      kind: "path";
      d: string;
      fill?: string;
      stroke?: string;
      strokeWidth?: number;
      opacity?: number;
      dataId?: string;
      className?: string;
    }
  | {
      kind: "text";
      x: number;
      y: number;
      content: string;
      anchor?: "start" | "middle" | "end";
      fontSize?: number;
      className?: string;
    }
  | { kind: "group"; children: SvgNode[]; className?: string; transform?: string };

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function attrs(pairs: Record<string, string | number | undefined>): string {
  return Object.entries(pairs)
    .filter(([, v]) => v !== undefined)
    .map(([k, v]) => ` ${k}="${typeof v === "number" ? String(v) : esc(v as string)}"`)
    .join("");
}

function node(n: SvgNode): string {
  switch (n.kind) {
    case "circle":
      return `<circle${attrs({
        cx: n.cx,
        cy: n.cy,
        r: n.r,
        fill: n.fill,
        stroke: n.stroke,
        "stroke-width": n.strokeWidth,
        "data-id": n.dataId,
        class: n.className,
      })}/>`;
    case "rect":
      return `<rect${attrs({
        x: n.x,
        y: n.y,
        width: n.width,
        height: n.height,
        fill: n.fill,
        stroke: n.stroke,
        opacity: n.opacity,
        "data-id": n.dataId,
        class: n.className,
      })}/>`;
    case "line":
      return `<line${attrs({
        x1: n.x1,
        y1: n.y1,
        x2: n.x2,
        y2: n.y2,
        stroke: n.stroke,
        "stroke-width": n.strokeWidth,
        "stroke-dasharray": n.dashed ? "4 3" : undefined,
        class: n.className,
      })}/>`;
    case "polyline":
      return `<polyline${attrs({
        points: n.points.map(([x, y]) => `${String(x)},${String(y)}`).join(" "),
        fill: n.fill ?? "none",
        stroke: n.stroke,
        "stroke-width": n.strokeWidth,
        "stroke-dasharray": n.dashed ? "4 3" : undefined,
        "data-id": n.dataId,
        class: n.className,
      })}/>`;
    case "path":
      return `<path${attrs({
        d: n.d,
        fill: n.fill ?? "none",
        stroke: n.stroke,
        "stroke-width": n.strokeWidth,
        opacity: n.opacity,
        "data-id": n.dataId,
        class: n.className,
      })}/>`;
    case "text":
      return `<text${attrs({
        x: n.x,
        y: n.y,
        "text-anchor": n.anchor,
        "font-size": n.fontSize,
        class: n.className,
      })}>${esc(n.content)}</text>`;
    case "group":
      return `<g${attrs({ class: n.className, transform: n.transform })}>${n.children
        .map(node)
        .join("")}</g>`;
  }
}

export function renderSvg(width: number, height: number, nodes: SvgNode[]): string {
  const body = nodes.map(node).join("");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">${body}</svg>`
  );
}
