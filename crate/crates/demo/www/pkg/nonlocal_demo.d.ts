/* tslint:disable */
/* eslint-disable */

/**
 * Particle solution of the blow-up problem at time `t`.
 *
 * Returns interleaved `(x, u_particle, u_exact)` triples, one per particle.
 */
export function blowupProfile(t: number, particles: number): Float64Array;

/**
 * Centroid and spread of the particle solution for the smoothed kernel, started from the blow-up datum.
 *
 * Returns interleaved `(t, centroid, spread, predicted)` rows up to `t_end`.
 */
export function centroidTrajectory(alpha: number, n: number, particles: number, t_end: number): Float64Array;

/**
 * Samples the smoothed step kernel on `[-1.5, 0.5]` as interleaved `(x, η(x))` pairs.
 */
export function kernelProfile(alpha: number, n: number, samples: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly blowupProfile: (a: number, b: number) => [number, number, number, number];
    readonly centroidTrajectory: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly kernelProfile: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
