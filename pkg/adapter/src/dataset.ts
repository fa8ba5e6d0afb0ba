/**
 * Loading and validation of exported dataset directories.
 *
 * A dataset directory holds `edges.csv` (undirected pairs, one row per edge
 * per timestep, sorted by (t,u,v)), `events.csv` (both orientations, grouped
 * by t) and `manifest.json`. The loader re-derives the statistics from the
 * edge file and refuses any manifest that disagrees, mirroring the producer's
 * own import validation.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";

export type Pair = readonly [number, number];

export class DatasetError extends Error {}
export class SchemaError extends DatasetError {}
export class StatsMismatchError extends DatasetError {}

export interface SplitRanges {
  readonly trainEnd: number;
  readonly valEnd: number;
  readonly numTimesteps: number;
}

export interface TaskInfo {
  readonly family: string;
  readonly seed: number;
  readonly k?: number;
  readonly n?: number;
  readonly num_periods?: number;
  readonly lag?: number;
  readonly dist?: number;
  readonly paths?: number;
  readonly num_effect_steps?: number;
  readonly num_intermediates?: number;
  readonly base: Record<string, unknown> | null;
}

export interface Manifest {
  readonly schema_version: number;
  readonly task: TaskInfo | null;
  readonly num_nodes: number;
  readonly num_timesteps: number;
  readonly split: {
    readonly train_end: number;
    readonly val_end: number;
    readonly num_timesteps: number;
  };
  readonly directed_edge_count: number;
  readonly roles: Record<string, number>;
  readonly generator: Record<string, string>;
}

const SCHEMA_VERSION = 1;

/**
 * Encode a canonical pair as one integer key: (min << 16) | max.
 * Context-free (no node count needed), valid for node ids below 2^16.
 */
export function pairKey(u: number, v: number): number {
  const a = Math.min(u, v);
  const b = Math.max(u, v);
  return a * 65536 + b;
}

export function keyPair(key: number): Pair {
  return [Math.floor(key / 65536), key % 65536];
}

export class LoadedDataset {
  private readonly perTimestep: Pair[][];
  private readonly keyCache = new Map<number, Set<number>>();

  constructor(
    readonly manifest: Manifest,
    perTimestep: Pair[][],
  ) {
    this.perTimestep = perTimestep;
  }

  get numNodes(): number {
    return this.manifest.num_nodes;
  }

  get numTimesteps(): number {
    return this.manifest.num_timesteps;
  }

  get split(): SplitRanges {
    return {
      trainEnd: this.manifest.split.train_end,
      valEnd: this.manifest.split.val_end,
      numTimesteps: this.manifest.split.num_timesteps,
    };
  }

  /** Undirected canonical edges of snapshot t. */
  snapshot(t: number): readonly Pair[] {
    const edges = this.perTimestep[t];
    if (edges === undefined) {
      throw new RangeError(`timestep ${t} outside [0, ${this.numTimesteps})`);
    }
    return edges;
  }

  /** Edge set of snapshot t as integer pair keys (cached per timestep). */
  edgeKeys(t: number): ReadonlySet<number> {
    let keys = this.keyCache.get(t);
    if (keys === undefined) {
      keys = new Set(this.snapshot(t).map(([u, v]) => pairKey(u, v)));
      this.keyCache.set(t, keys);
    }
    return keys;
  }
}

function parseManifest(raw: string): Manifest {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch (err) {
    throw new SchemaError(`manifest.json is not valid JSON: ${String(err)}`);
  }
  const m = data as Manifest;
  if (m.schema_version !== SCHEMA_VERSION) {
    throw new SchemaError(
      `unknown schema version ${String(m.schema_version)} (expected ${SCHEMA_VERSION})`,
    );
  }
  for (const field of [
    "num_nodes",
    "num_timesteps",
    "directed_edge_count",
  ] as const) {
    if (!Number.isInteger(m[field])) {
      throw new SchemaError(`manifest field ${field} missing or not an integer`);
    }
  }
  if (m.num_nodes >= 65536) {
    throw new SchemaError("node counts above 2^16 are not supported by this adapter");
  }
  const s = m.split;
  if (
    s === undefined ||
    !(0 < s.train_end && s.train_end < s.val_end && s.val_end <= s.num_timesteps)
  ) {
    throw new SchemaError("manifest split boundaries are invalid");
  }
  if (s.num_timesteps !== m.num_timesteps) {
    throw new SchemaError("split range does not cover the declared timesteps");
  }
  return m;
}

function parseEdges(raw: string, manifest: Manifest): Pair[][] {
  const lines = raw.split("\n");
  if (lines[0] !== "t,u,v") {
    throw new SchemaError(`bad edges.csv header ${JSON.stringify(lines[0])}`);
  }
  const perTimestep: Pair[][] = Array.from(
    { length: manifest.num_timesteps },
    () => [],
  );
  let rows = 0;
  let prevT = -1;
  let prevU = -1;
  let prevV = -1;
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i];
    if (line === undefined || line === "") continue;
    const parts = line.split(",");
    if (parts.length !== 3) {
      throw new SchemaError(`edges.csv line ${i + 1}: expected 3 columns`);
    }
    const t = Number(parts[0]);
    const u = Number(parts[1]);
    const v = Number(parts[2]);
    if (![t, u, v].every(Number.isInteger)) {
      throw new SchemaError(`edges.csv line ${i + 1}: not an integer triple`);
    }
    if (t < 0 || t >= manifest.num_timesteps) {
      throw new StatsMismatchError(`edges.csv line ${i + 1}: timestep ${t} out of range`);
    }
    if (!(0 <= u && u < v && v < manifest.num_nodes)) {
      throw new StatsMismatchError(
        `edges.csv line ${i + 1}: pair (${u}, ${v}) not canonical/in range`,
      );
    }
    if (t < prevT || (t === prevT && (u < prevU || (u === prevU && v <= prevV)))) {
      throw new StatsMismatchError(`edges.csv line ${i + 1}: rows not strictly sorted`);
    }
    prevT = t;
    prevU = u;
    prevV = v;
    perTimestep[t]!.push([u, v]);
    rows += 1;
  }
  if (manifest.directed_edge_count !== 2 * rows) {
    throw new StatsMismatchError(
      `manifest declares ${manifest.directed_edge_count} directed edges, ` +
        `file holds ${2 * rows}`,
    );
  }
  return perTimestep;
}

export function loadDataset(dir: string): LoadedDataset {
  let manifestRaw: string;
  try {
    manifestRaw = readFileSync(join(dir, "manifest.json"), "utf-8");
  } catch {
    throw new SchemaError(`missing manifest.json in ${dir}`);
  }
  const manifest = parseManifest(manifestRaw);
  let edgesRaw: string;
  try {
    edgesRaw = readFileSync(join(dir, "edges.csv"), "utf-8");
  } catch {
    throw new SchemaError(`missing edges.csv in ${dir}`);
  }
  return new LoadedDataset(manifest, parseEdges(edgesRaw, manifest));
}
