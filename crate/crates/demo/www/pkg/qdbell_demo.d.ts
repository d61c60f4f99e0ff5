/* tslint:disable */
/* eslint-disable */

/**
 * A simulated splitting scan and its least-squares fit.
 */
export class ScanFit {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    angles(): Float64Array;
    /**
     * The fitted curve at `points` angles evenly spaced over `[0°, 180°)`.
     */
    curve(points: number): Float64Array;
    values(): Float64Array;
    readonly phase_deg: number;
    readonly sigma_uev: number;
    readonly splitting_uev: number;
    /**
     * Whether the splitting is below 0.5 µeV by more than twice its error.
     */
    readonly verdict: boolean;
}

/**
 * `[C_rect, C_diag, C_circ, f, S_RC, S_DC, S_RD]` predicted for the
 * calibrated source with the given splitting, exciton lifetime and noise
 * scale (1 reproduces the calibrated noise, 0 removes it).
 */
export function bell_parameters(splitting_uev: number, tau_x_ns: number, noise_scale: number, gated: boolean): Float64Array;

/**
 * The four correlations `E(α,β), E(α′,β), E(α,β′), E(α′,β′)` of a Werner
 * state with the given visibility, for half-wave plates ahead of vertical
 * polarizers, followed by the CHSH value and the largest CHSH value any
 * settings could reach: `[E₁, E₂, E₃, E₄, S, S_max]`.
 */
export function chsh_explorer(xx_a_deg: number, xx_b_deg: number, x_a_deg: number, x_b_deg: number, visibility: number): Float64Array;

/**
 * Fidelity at `points` splittings evenly spaced over `[0, max_splitting_uev]`.
 */
export function fidelity_curve(tau_x_ns: number, noise_scale: number, gated: boolean, max_splitting_uev: number, points: number): Float64Array;

export function simulate_and_fit(splitting_uev: number, phase_deg: number, noise_uev: number, points: number, seed: bigint): ScanFit;

/**
 * Degrees of correlation `[C_rect, C_diag, C_circ]` of a Werner state.
 */
export function werner_correlations(visibility: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_scanfit_free: (a: number, b: number) => void;
    readonly bell_parameters: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly chsh_explorer: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly fidelity_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly scanfit_angles: (a: number) => [number, number];
    readonly scanfit_curve: (a: number, b: number) => [number, number];
    readonly scanfit_phase_deg: (a: number) => number;
    readonly scanfit_sigma_uev: (a: number) => number;
    readonly scanfit_splitting_uev: (a: number) => number;
    readonly scanfit_values: (a: number) => [number, number];
    readonly scanfit_verdict: (a: number) => number;
    readonly simulate_and_fit: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number];
    readonly werner_correlations: (a: number) => [number, number];
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
