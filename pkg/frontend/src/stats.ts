/**
 * Percentile statistics for the boxplots.
 *
 * Percentiles use linear interpolation between closest ranks: for a
 * sorted sample of size n, percentile p sits at rank p/100 * (n - 1)
 * and fractional ranks interpolate between the two neighbours.
 */

export interface BoxStats {
  q1: number;
  median: number;
  q3: number;
  whiskerLow: number;
  whiskerHigh: number;
  outliers: number[];
  samples: number;
}

export function percentile(values: number[], p: number): number {
  if (values.length === 0) {
    throw new Error("percentile of an empty sample");
  }
  if (p < 0 || p > 100) {
    throw new Error(`percentile ${p} out of range 0..100`);
  }
  const sorted = [...values].sort((a, b) => a - b);
  const rank = (p / 100) * (sorted.length - 1);
  const lo = Math.floor(rank);
  const hi = Math.ceil(rank);
  if (lo === hi) return sorted[lo];
  const frac = rank - lo;
  return sorted[lo] * (1 - frac) + sorted[hi] * frac;
}

export function boxStats(values: number[], pLow = 2, pHigh = 98): BoxStats {
  if (pLow >= pHigh) {
    throw new Error(`whisker percentiles must satisfy low < high, got ${pLow} >= ${pHigh}`);
  }
  const whiskerLow = percentile(values, pLow);
  const whiskerHigh = percentile(values, pHigh);
  return {
    q1: percentile(values, 25),
    median: percentile(values, 50),
    q3: percentile(values, 75),
    whiskerLow,
    whiskerHigh,
    outliers: values.filter((v) => v < whiskerLow || v > whiskerHigh),
    samples: values.length,
  };
}
