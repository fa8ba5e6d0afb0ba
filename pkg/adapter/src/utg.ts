/**
 * Event-batch view of a loaded dataset: every undirected edge becomes two
 * directed events (u,v,t) and (v,u,t), batched per timestep in ascending
 * order — the same rows `events.csv` holds.
 */

import { LoadedDataset } from "./dataset.js";

export interface UtgBatch {
  readonly t: number;
  /** Directed events [src, dst], sorted by (src, dst). */
  readonly events: ReadonlyArray<readonly [number, number]>;
}

export function* iterUtgBatches(ds: LoadedDataset): Generator<UtgBatch> {
  for (let t = 0; t < ds.numTimesteps; t++) {
    const events: Array<readonly [number, number]> = [];
    for (const [u, v] of ds.snapshot(t)) {
      events.push([u, v], [v, u]);
    }
    events.sort((a, b) => a[0] - b[0] || a[1] - b[1]);
    yield { t, events };
  }
}

/** Total directed rows across all batches; must equal the manifest count. */
export function utgRowTotal(ds: LoadedDataset): number {
  let total = 0;
  for (const batch of iterUtgBatches(ds)) {
    total += batch.events.length;
  }
  return total;
}
