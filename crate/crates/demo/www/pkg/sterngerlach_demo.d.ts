/* tslint:disable */
/* eslint-disable */

/**
 * Rows `x, ρ₊, ρ₋` at time `t` over `[-x_max, x_max]`, flattened.
 */
export function density_profile(force_scale: number, t: number, x_max: number, points: number): Float64Array;

/**
 * Rows `t, S_ent, H` over `[0, t_max]`, flattened.
 */
export function entropy_curve(force_scale: number, t_max: number, points: number): Float64Array;

/**
 * `[τ1, τ2, τ3]` in seconds.
 */
export function timescales(force_scale: number): Float64Array;

/**
 * One Wigner entry on an `nq × np` grid, q outer, in scaled units.
 *
 * `entry`: 0 = W₊₊, 1 = W₋₋, 2 = Re W₊₋, 3 = Tr/2 + Re W₊₋ (spin along x).
 * The first four values are the grid bounds `q_lo, q_hi, p_lo, p_hi`.
 * With `pixel_um > 0` the map is averaged over Δ = `pixel_um` µm,
 * δ = 100h/Δ.
 */
export function wigner_map(force_scale: number, t: number, nq: number, np: number, entry: number, pixel_um: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly density_profile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly entropy_curve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly timescales: (a: number) => [number, number, number, number];
    readonly wigner_map: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
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
