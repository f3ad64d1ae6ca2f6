import { readFileSync, writeFileSync, mkdirSync } from 'fs';
import { dirname } from 'path';

import { FigureSpecSchema, render } from './figures';

/** CLI: render --spec FILE.json
 *  Renders one figure from stickywave CSVs; writes the output file only on
 *  success and exits nonzero otherwise. */
export function main(argv: string[]): number {
  const idx = argv.indexOf('--spec');
  if (idx < 0 || idx + 1 >= argv.length) {
    process.stderr.write('usage: render --spec FILE.json\n');
    return 2;
  }
  let spec;
  try {
    spec = FigureSpecSchema.parse(JSON.parse(readFileSync(argv[idx + 1], 'utf8')));
  } catch (err) {
    process.stderr.write(`bad figure spec: ${(err as Error).message}\n`);
    return 2;
  }
  try {
    const svg = render(spec);
    mkdirSync(dirname(spec.output), { recursive: true });
    writeFileSync(spec.output, svg);
    process.stdout.write(`wrote ${spec.output}\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`render failed: ${(err as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
