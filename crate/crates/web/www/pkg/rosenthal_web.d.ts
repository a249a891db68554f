/* tslint:disable */
/* eslint-disable */

export class Evaluation {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly g: number;
    readonly k: string;
    readonly k_route: string;
    readonly l: string;
    readonly l_route: string;
    /**
     * Larger of the K and L relative error bounds.
     */
    readonly rel_error: number;
    readonly s: number;
}

/**
 * K, L, S, G at `p >= 2`.
 */
export function evaluate(p: number): Evaluation;

export function ratio_curve(ratio: string, p_min: number, p_max: number, points: number): Float64Array;

export function saddle_point(kind: string, p: number): number;

export function series_weights(kind: string, p: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_evaluation_free: (a: number, b: number) => void;
    readonly evaluate: (a: number) => [number, number, number];
    readonly evaluation_g: (a: number) => number;
    readonly evaluation_k: (a: number) => [number, number];
    readonly evaluation_k_route: (a: number) => [number, number];
    readonly evaluation_l: (a: number) => [number, number];
    readonly evaluation_l_route: (a: number) => [number, number];
    readonly evaluation_rel_error: (a: number) => number;
    readonly evaluation_s: (a: number) => number;
    readonly ratio_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly saddle_point: (a: number, b: number, c: number) => [number, number, number];
    readonly series_weights: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
