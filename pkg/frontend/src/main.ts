/** CLI: read a sweep CSV and write an SVG or PNG figure. */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { CsvSchemaError, parseSweepCsv } from "./csv.js";
import { buildFigureSvg, XAxis } from "./figure.js";

const USAGE = `usage: render --input results.csv --out figure.svg [options]
  --input, -i   sweep CSV produced by the simulator (required)
  --out, -o     output image path; .svg or .png decides the format (required)
  --x           x axis column: sigma (default) or mu
  --log-x       logarithmic x axis
  --log-y       logarithmic y axis
  --width       panel width in px (default 480)
  --height      figure height in px (default 360)`;

export async function runCli(argv: string[]): Promise<number> {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        input: { type: "string", short: "i" },
        out: { type: "string", short: "o" },
        x: { type: "string", default: "sigma" },
        "log-x": { type: "boolean", default: false },
        "log-y": { type: "boolean", default: false },
        width: { type: "string" },
        height: { type: "string" },
        help: { type: "boolean", short: "h", default: false },
      },
    });
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  const v = parsed.values;
  if (v.help) {
    console.log(USAGE);
    return 0;
  }
  if (!v.input || !v.out) {
    console.error("error: --input and --out are required");
    console.error(USAGE);
    return 2;
  }
  if (v.x !== "sigma" && v.x !== "mu") {
    console.error(`error: --x must be sigma or mu, got ${v.x}`);
    return 2;
  }
  let text: string;
  try {
    text = readFileSync(v.input, "utf8");
  } catch (err) {
    console.error(`error: cannot read ${v.input}: ${(err as Error).message}`);
    return 2;
  }
  let svg: string;
  try {
    const rows = parseSweepCsv(text);
    svg = buildFigureSvg(rows, {
      xAxis: v.x as XAxis,
      logX: v["log-x"],
      logY: v["log-y"],
      width: v.width ? Number(v.width) : undefined,
      height: v.height ? Number(v.height) : undefined,
    });
  } catch (err) {
    if (err instanceof CsvSchemaError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  if (v.out.endsWith(".svg")) {
    writeFileSync(v.out, svg);
  } else if (v.out.endsWith(".png")) {
    const sharp = (await import("sharp")).default;
    const png = await sharp(Buffer.from(svg)).png().toBuffer();
    writeFileSync(v.out, png);
  } else {
    console.error(`error: unsupported output extension on ${v.out}; use .svg or .png`);
    return 2;
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  runCli(process.argv.slice(2)).then(
    (code) => process.exit(code),
    (err) => {
      console.error(`runtime error: ${err?.message ?? err}`);
      process.exit(1);
    },
  );
}
