/** Parsing of the batch results CSV. */

import Papa from "papaparse";

export interface BenchRow {
  instance: number;
  q: number;
  m: number;
  fmaDp: number;
  fmaOpt: number;
  proven: boolean;
  ratio: number;
}

const REQUIRED = ["instance", "q", "m", "fma_dp", "fma_opt", "status", "ratio"];

export function parseBenchCsv(text: string): BenchRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new Error(`CSV parse error: ${parsed.errors[0].message}`);
  }
  const columns = parsed.meta.fields ?? [];
  for (const col of REQUIRED) {
    if (!columns.includes(col)) {
      throw new Error(`missing column: ${col}`);
    }
  }
  return parsed.data.map((row) => ({
    instance: Number(row.instance),
    q: Number(row.q),
    m: Number(row.m),
    fmaDp: Number(row.fma_dp),
    fmaOpt: Number(row.fma_opt),
    proven: row.status === "proven",
    // recomputed from the exact integer costs rather than the rounded column
    ratio: Number(row.fma_opt) / Number(row.fma_dp),
  }));
}

/** Proven records for one chain length, keyed by machine count. */
export function ratiosByMachines(rows: BenchRow[], q?: number): Map<number, number[]> {
  const byM = new Map<number, number[]>();
  for (const row of rows) {
    if (!row.proven) continue;
    if (q !== undefined && row.q !== q) continue;
    const bucket = byM.get(row.m) ?? [];
    bucket.push(row.ratio);
    byM.set(row.m, bucket);
  }
  return new Map([...byM.entries()].sort((a, b) => a[0] - b[0]));
}
