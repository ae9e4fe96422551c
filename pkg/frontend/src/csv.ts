/** Parsing and validation of the simulator's sweep CSV. */

export interface SweepRow {
  estimator: string;
  n: number;
  k: number;
  tau: number;
  sigma: number;
  mu: number;
  sweep_value: number;
  mse_scaled: number;
  ci_low: number;
  ci_high: number;
  lambda_opt: number;
  gamma_opt: number;
  reps: number;
  seed: number;
}

export const REQUIRED_COLUMNS = [
  "estimator",
  "n",
  "k",
  "tau",
  "sigma",
  "mu",
  "sweep_value",
  "mse_scaled",
  "ci_low",
  "ci_high",
  "lambda_opt",
  "gamma_opt",
  "reps",
  "seed",
] as const;

export class CsvSchemaError extends Error {}

/**
 * Parse a sweep CSV. The header must contain every required column
 * (extras are ignored); an empty body is rejected.
 */
export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.split(/\r?\n/).filter((ln) => ln.length > 0);
  if (lines.length === 0) {
    throw new CsvSchemaError("CSV is empty: no header row");
  }
  const header = lines[0].split(",").map((c) => c.trim());
  const missing = REQUIRED_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new CsvSchemaError(`CSV is missing required columns: ${missing.join(", ")}`);
  }
  if (lines.length === 1) {
    throw new CsvSchemaError("CSV has a header but no data rows");
  }
  const idx = new Map(header.map((c, i) => [c, i]));
  const num = (fields: string[], col: string, line: number): number => {
    const raw = fields[idx.get(col)!];
    const value = Number(raw);
    if (raw === undefined || raw === "" || (Number.isNaN(value) && raw !== "nan")) {
      throw new CsvSchemaError(`line ${line}: bad numeric value ${raw!} in column ${col}`);
    }
    return value;
  };
  return lines.slice(1).map((ln, i) => {
    const fields = ln.split(",").map((c) => c.trim());
    if (fields.length < header.length) {
      throw new CsvSchemaError(`line ${i + 2}: expected ${header.length} fields, got ${fields.length}`);
    }
    return {
      estimator: fields[idx.get("estimator")!],
      n: num(fields, "n", i + 2),
      k: num(fields, "k", i + 2),
      tau: num(fields, "tau", i + 2),
      sigma: num(fields, "sigma", i + 2),
      mu: num(fields, "mu", i + 2),
      sweep_value: num(fields, "sweep_value", i + 2),
      mse_scaled: num(fields, "mse_scaled", i + 2),
      ci_low: num(fields, "ci_low", i + 2),
      ci_high: num(fields, "ci_high", i + 2),
      lambda_opt: num(fields, "lambda_opt", i + 2),
      gamma_opt: num(fields, "gamma_opt", i + 2),
      reps: num(fields, "reps", i + 2),
      seed: num(fields, "seed", i + 2),
    };
  });
}
