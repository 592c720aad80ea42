/* tslint:disable */
/* eslint-disable */

/**
 * A fitted estimate together with its score curve.
 */
export class Fit {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly contrast: Float64Array;
    readonly crit: Float64Array;
    readonly estimate: Float64Array;
    readonly mHat: number;
    readonly ms: Float64Array;
    readonly pen: Float64Array;
    /**
     * True density on `xs`; empty for user data.
     */
    readonly truth: Float64Array;
    readonly xs: Float64Array;
}

/**
 * Variance proxy and penalty per candidate dimension.
 */
export class Profile {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly delta1: Float64Array;
    readonly ms: Float64Array;
    readonly pen: Float64Array;
}

export function fitText(text: string, noise: string, sigma: number): Fit;

export function penaltyProfile(noise: string, sigma: number, n: number): Profile;

export function simulateFit(density: string, noise: string, s2n: number, n: number, seed: number): Fit;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_fit_free: (a: number, b: number) => void;
    readonly __wbg_profile_free: (a: number, b: number) => void;
    readonly fitText: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly fit_contrast: (a: number) => [number, number];
    readonly fit_crit: (a: number) => [number, number];
    readonly fit_estimate: (a: number) => [number, number];
    readonly fit_m_hat: (a: number) => number;
    readonly fit_ms: (a: number) => [number, number];
    readonly fit_pen: (a: number) => [number, number];
    readonly fit_truth: (a: number) => [number, number];
    readonly fit_xs: (a: number) => [number, number];
    readonly penaltyProfile: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly profile_delta1: (a: number) => [number, number];
    readonly profile_ms: (a: number) => [number, number];
    readonly profile_pen: (a: number) => [number, number];
    readonly simulateFit: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
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
