import { z } from 'zod';

import { CsvTable, column, readVersionedCsv, requireColumns } from './csv';
import { leastSquaresSlope, slopePerDoubling } from './fit';
import { HEIGHT, MARGIN, PALETTE, Svg, WIDTH, fmt, heatColor, linearScale } from './svg';

export const FigureSpecSchema = z.object({
  kind: z.enum(['convergence', 'trajectories', 'profiles', 'field']),
  inputs: z.array(z.string()).min(1),
  output: z.string(),
  title: z.string().default(''),
  xlabel: z.string().default(''),
  ylabel: z.string().default(''),
  column: z.string().default('value'),
});

export type FigureSpec = z.infer<typeof FigureSpecSchema>;

const X0 = MARGIN.left;
const X1 = WIDTH - MARGIN.right;
const Y0 = HEIGHT - MARGIN.bottom;
const Y1 = MARGIN.top;

function groupBy(table: CsvTable, key: string): Map<string, number[]> {
  const idx = table.header.indexOf(key);
  const groups = new Map<string, number[]>();
  table.rows.forEach((row, i) => {
    const bucket = groups.get(row[idx]);
    if (bucket) {
      bucket.push(i);
    } else {
      groups.set(row[idx], [i]);
    }
  });
  return groups;
}

/** Log-log error-vs-n plot, one line per output time, annotated with the
 *  least-squares slope of ln(error) per doubling of n. */
export function renderConvergence(spec: FigureSpec): string {
  const table = readVersionedCsv(spec.inputs[0]);
  requireColumns(table, ['n', 't', 'l1_error'], spec.inputs[0]);
  const ns = column(table, 'n');
  const errs = column(table, 'l1_error');
  const finite = errs.every((e) => Number.isFinite(e) && e > 0);
  if (!finite) {
    throw new Error('convergence figure needs finite positive errors');
  }
  const lx = ns.map(Math.log2);
  const ly = errs.map(Math.log);
  const x = linearScale(Math.min(...lx), Math.max(...lx), X0, X1);
  const y = linearScale(Math.min(...ly), Math.max(...ly), Y0, Y1);

  const svg = new Svg(spec.title || 'L1 error vs particle count');
  svg.axes(x, y, spec.xlabel || 'log2 n', spec.ylabel || 'ln L1 error');

  const slopes: number[] = [];
  let series = 0;
  for (const [t, rows] of groupBy(table, 't')) {
    const gx = rows.map((i) => lx[i]);
    const gy = rows.map((i) => ly[i]);
    const order = gx.map((_, k) => k).sort((a, b) => gx[a] - gx[b]);
    const slope = slopePerDoubling(rows.map((i) => ns[i]), rows.map((i) => errs[i]));
    slopes.push(slope);
    const colour = PALETTE[series % PALETTE.length];
    svg.polyline(order.map((k) => [x(gx[k]), y(gy[k])]), colour,
      `data-t="${t}" data-slope="${fmt(slope)}"`);
    for (const k of order) {
      svg.circle(x(gx[k]), y(gy[k]), 3, colour);
    }
    svg.text(X1 - 6, y(gy[order[order.length - 1]]) - 6, `t=${t}`,
      `text-anchor="end" fill="${colour}"`);
    series += 1;
  }
  const mean = slopes.reduce((a, b) => a + b, 0) / slopes.length;
  svg.raw(`<text x="${X0 + 10}" y="${Y1 + 16}" data-role="slope" ` +
    `data-slope="${fmt(mean)}">slope ${fmt(mean)} (ln error per doubling)</text>`);
  return svg.render();
}

/** Space-time rays of every particle; type 1 drawn blue, type 2 red. */
export function renderTrajectories(spec: FigureSpec): string {
  const table = readVersionedCsv(spec.inputs[0]);
  requireColumns(table, ['t', 'type', 'k', 'x'], spec.inputs[0]);
  const ts = column(table, 't');
  const xs = column(table, 'x');
  const x = linearScale(Math.min(...xs), Math.max(...xs), X0, X1);
  const y = linearScale(Math.min(...ts), Math.max(...ts), Y0, Y1);

  const svg = new Svg(spec.title || 'Particle trajectories');
  svg.axes(x, y, spec.xlabel || 'x', spec.ylabel || 't');
  const typeIdx = table.header.indexOf('type');
  const kIdx = table.header.indexOf('k');
  const byParticle = new Map<string, number[]>();
  table.rows.forEach((row, i) => {
    const key = `${row[typeIdx]}:${row[kIdx]}`;
    const bucket = byParticle.get(key);
    if (bucket) {
      bucket.push(i);
    } else {
      byParticle.set(key, [i]);
    }
  });
  for (const [key, rows] of byParticle) {
    const type = Number(key.split(':')[0]);
    const order = rows.slice().sort((a, b) => ts[a] - ts[b]);
    svg.polyline(order.map((i) => [x(xs[i]), y(ts[i])]),
      PALETTE[(type - 1) % PALETTE.length], `data-particle="${key}"`);
  }
  return svg.render();
}

/** Overlaid solution profiles, one curve per output time. */
export function renderProfiles(spec: FigureSpec): string {
  const table = readVersionedCsv(spec.inputs[0]);
  requireColumns(table, ['t', 'x', spec.column], spec.inputs[0]);
  const xs = column(table, 'x');
  const vs = column(table, spec.column);
  const x = linearScale(Math.min(...xs), Math.max(...xs), X0, X1);
  const y = linearScale(Math.min(...vs), Math.max(...vs), Y0, Y1);

  const svg = new Svg(spec.title || `Profiles of ${spec.column}`);
  svg.axes(x, y, spec.xlabel || 'x', spec.ylabel || spec.column);
  let series = 0;
  for (const [t, rows] of groupBy(table, 't')) {
    const order = rows.slice().sort((a, b) => xs[a] - xs[b]);
    svg.polyline(order.map((i) => [x(xs[i]), y(vs[i])]),
      PALETTE[series % PALETTE.length], `data-t="${t}"`);
    series += 1;
  }
  return svg.render();
}

/** Space-time heat map of one column of a field sheet. */
export function renderField(spec: FigureSpec): string {
  const table = readVersionedCsv(spec.inputs[0]);
  requireColumns(table, ['t', 'x', spec.column], spec.inputs[0]);
  const ts = column(table, 't');
  const xs = column(table, 'x');
  const vs = column(table, spec.column);
  const tVals = Array.from(new Set(ts)).sort((a, b) => a - b);
  const xVals = Array.from(new Set(xs)).sort((a, b) => a - b);
  const x = linearScale(xVals[0], xVals[xVals.length - 1], X0, X1);
  const y = linearScale(tVals[0], tVals[tVals.length - 1], Y0, Y1);
  const vMin = Math.min(...vs);
  const vMax = Math.max(...vs);
  const span = vMax > vMin ? vMax - vMin : 1;

  const svg = new Svg(spec.title || `Field ${spec.column}(t, x)`);
  const cellW = (X1 - X0) / xVals.length;
  const cellH = (Y0 - Y1) / tVals.length;
  for (let i = 0; i < ts.length; i++) {
    svg.rect(x(xs[i]) - cellW / 2, y(ts[i]) - cellH / 2, cellW, cellH,
      heatColor((vs[i] - vMin) / span));
  }
  svg.axes(x, y, spec.xlabel || 'x', spec.ylabel || 't');
  return svg.render();
}

export function render(spec: FigureSpec): string {
  switch (spec.kind) {
    case 'convergence':
      return renderConvergence(spec);
    case 'trajectories':
      return renderTrajectories(spec);
    case 'profiles':
      return renderProfiles(spec);
    case 'field':
      return renderField(spec);
  }
}

/** Independent re-fit of a convergence CSV (used by tests and callers that
 *  want the numeric slope without rendering). */
export function convergenceSlopes(path: string): Map<string, number> {
  const table = readVersionedCsv(path);
  requireColumns(table, ['n', 't', 'l1_error'], path);
  const ns = column(table, 'n');
  const errs = column(table, 'l1_error');
  const out = new Map<string, number>();
  for (const [t, rows] of groupBy(table, 't')) {
    out.set(t, leastSquaresSlope(
      rows.map((i) => Math.log2(ns[i])), rows.map((i) => Math.log(errs[i]))));
  }
  return out;
}
