/** Minimal deterministic SVG scene builder: fixed canvas, fixed precision,
 *  no timestamps or generated ids, so equal inputs give equal bytes. */

export const WIDTH = 800;
export const HEIGHT = 600;
export const MARGIN = { left: 70, right: 20, top: 40, bottom: 50 };

export function fmt(value: number): string {
  if (!Number.isFinite(value)) {
    return '0';
  }
  const text = value.toPrecision(8);
  return text.includes('.') ? text.replace(/\.?0+(e|$)/, '$1') : text;
}

export interface Scale {
  (value: number): number;
  readonly min: number;
  readonly max: number;
}

export function linearScale(min: number, max: number, lo: number, hi: number): Scale {
  const span = max > min ? max - min : 1;
  const scale = ((value: number) => lo + ((value - min) / span) * (hi - lo)) as Scale;
  Object.assign(scale, { min, max });
  return scale;
}

export function ticks(min: number, max: number, count = 6): number[] {
  if (max <= min) {
    return [min];
  }
  const raw = (max - min) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= raw) ?? raw;
  const out: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + 1e-12 * step; v += step) {
    out.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return out;
}

export class Svg {
  private parts: string[] = [];

  constructor(title: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="13">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${esc(title)}</text>`,
    );
  }

  axes(x: Scale, y: Scale, xlabel: string, ylabel: string): void {
    const { left, right, top, bottom } = MARGIN;
    const x0 = left;
    const x1 = WIDTH - right;
    const y0 = HEIGHT - bottom;
    const y1 = top;
    this.parts.push(
      `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`,
      `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`,
    );
    for (const t of ticks(x.min, x.max)) {
      const px = fmt(x(t));
      this.parts.push(
        `<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="black"/>`,
        `<text x="${px}" y="${y0 + 20}" text-anchor="middle">${fmt(t)}</text>`,
      );
    }
    for (const t of ticks(y.min, y.max)) {
      const py = fmt(y(t));
      this.parts.push(
        `<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`,
        `<text x="${x0 - 8}" y="${py}" text-anchor="end" dominant-baseline="middle">${fmt(t)}</text>`,
      );
    }
    this.parts.push(
      `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" text-anchor="middle">${esc(xlabel)}</text>`,
      `<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 18 ${(y0 + y1) / 2})">${esc(ylabel)}</text>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, attrs = ''): void {
    const path = points.map(([px, py]) => `${fmt(px)},${fmt(py)}`).join(' ');
    this.parts.push(`<polyline points="${path}" fill="none" stroke="${stroke}" ${attrs}/>`);
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`);
  }

  text(x: number, y: number, content: string, attrs = ''): void {
    this.parts.push(`<text x="${fmt(x)}" y="${fmt(y)}" ${attrs}>${esc(content)}</text>`);
  }

  raw(markup: string): void {
    this.parts.push(markup);
  }

  render(): string {
    return this.parts.join('\n') + '\n</svg>\n';
  }
}

export function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

/** Fixed categorical palette (first entries match the two-type convention:
 *  type 1 blue, type 2 red). */
export const PALETTE = ['blue', 'red', 'green', 'orange', 'purple', 'teal'];

/** Grayscale-to-viridis-like ramp for field heat maps; v in [0, 1]. */
export function heatColor(v: number): string {
  const clamped = Math.min(1, Math.max(0, v));
  const r = Math.round(68 + clamped * (253 - 68));
  const g = Math.round(1 + clamped * (231 - 1));
  const b = Math.round(84 + clamped * (37 - 84));
  return `rgb(${r},${g},${b})`;
}
