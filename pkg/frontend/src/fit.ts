/** Ordinary least-squares slope of y against x. */
export function leastSquaresSlope(xs: number[], ys: number[]): number {
  if (xs.length !== ys.length || xs.length < 2) {
    throw new Error('need two equal-length samples of size >= 2');
  }
  const n = xs.length;
  const mx = xs.reduce((a, b) => a + b, 0) / n;
  const my = ys.reduce((a, b) => a + b, 0) / n;
  let num = 0;
  let den = 0;
  for (let i = 0; i < n; i++) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  if (den === 0) {
    throw new Error('degenerate abscissae: zero variance');
  }
  return num / den;
}

/** Figure-style convergence slope: ln(error) per doubling of n. */
export function slopePerDoubling(ns: number[], errors: number[]): number {
  return leastSquaresSlope(ns.map(Math.log2), errors.map(Math.log));
}
