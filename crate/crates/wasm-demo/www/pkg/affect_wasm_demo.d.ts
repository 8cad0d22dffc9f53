/* tslint:disable */
/* eslint-disable */

/**
 * Noise-free appraisal of `kind` in the given context, with the response
 * label, the archetype of that point and the directive it would produce.
 */
export function appraise_event(kind: string, mood_v: number, mood_a: number, temp_v: number, temp_a: number): string;

/**
 * Names of the event kinds the explorer can pick from.
 */
export function event_kinds(): string;

/**
 * Label at every cell centre of an `n`×`n` grid over [-1, 1]², row-major
 * from high arousal to low.
 */
export function label_grid(n: number): string;

/**
 * Meter levels sampled every `step_s` for `hours` of untouched decay.
 * `idle` selects rest regeneration instead of drain. Returns four series
 * concatenated in touch, rest, social, hunger order.
 */
export function need_curves(hours: number, step_s: number, idle: boolean): Float64Array;

/**
 * Temperament at each day boundary when every day's mean appraisal is
 * `(mean_v, mean_a)`. Returns `[v0, a0, v1, a1, ...]`, `days + 1` points.
 */
export function temperament_trajectory(start_v: number, start_a: number, mean_v: number, mean_a: number, eta: number, days: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly appraise_event: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly event_kinds: () => [number, number];
    readonly label_grid: (a: number) => [number, number];
    readonly need_curves: (a: number, b: number, c: number) => [number, number];
    readonly temperament_trajectory: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
