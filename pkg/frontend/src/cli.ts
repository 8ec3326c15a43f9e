/**
 * Render the per-machine ratio boxplot from a batch results CSV.
 *
 *   node dist/cli.js --in results.csv --out ratios.svg [--q 4]
 */

import * as fs from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { parseBenchCsv, ratiosByMachines } from "./csv";
import { renderBoxplot } from "./svg";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .option("in", { type: "string", demandOption: true, describe: "input results CSV" })
    .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
    .option("q", { type: "number", describe: "only plot records with this chain length" })
    .option("whisker-low", { type: "number", default: 2, describe: "lower whisker percentile" })
    .option("whisker-high", { type: "number", default: 98, describe: "upper whisker percentile" })
    .strict()
    .parseSync();

  try {
    const rows = parseBenchCsv(fs.readFileSync(args.in, "ascii"));
    const byM = ratiosByMachines(rows, args.q);
    const svg = renderBoxplot(byM, { pLow: args["whisker-low"], pHigh: args["whisker-high"] });
    fs.writeFileSync(args.out, svg, "ascii");
    console.log(`wrote ${args.out} (${byM.size} machine counts)`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(hideBin(process.argv)));
}
