/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_fit_free: (a: number, b: number) => void;
export const __wbg_profile_free: (a: number, b: number) => void;
export const fitText: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const fit_contrast: (a: number) => [number, number];
export const fit_crit: (a: number) => [number, number];
export const fit_estimate: (a: number) => [number, number];
export const fit_m_hat: (a: number) => number;
export const fit_ms: (a: number) => [number, number];
export const fit_pen: (a: number) => [number, number];
export const fit_truth: (a: number) => [number, number];
export const fit_xs: (a: number) => [number, number];
export const penaltyProfile: (a: number, b: number, c: number, d: number) => [number, number, number];
export const profile_delta1: (a: number) => [number, number];
export const profile_ms: (a: number) => [number, number];
export const profile_pen: (a: number) => [number, number];
export const simulateFit: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
