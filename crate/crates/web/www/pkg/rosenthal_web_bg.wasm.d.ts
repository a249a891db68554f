/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_evaluation_free: (a: number, b: number) => void;
export const evaluate: (a: number) => [number, number, number];
export const evaluation_g: (a: number) => number;
export const evaluation_k: (a: number) => [number, number];
export const evaluation_k_route: (a: number) => [number, number];
export const evaluation_l: (a: number) => [number, number];
export const evaluation_l_route: (a: number) => [number, number];
export const evaluation_rel_error: (a: number) => number;
export const evaluation_s: (a: number) => number;
export const ratio_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const saddle_point: (a: number, b: number, c: number) => [number, number, number];
export const series_weights: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
