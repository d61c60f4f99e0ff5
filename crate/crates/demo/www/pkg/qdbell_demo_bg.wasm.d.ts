/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_scanfit_free: (a: number, b: number) => void;
export const bell_parameters: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const chsh_explorer: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const fidelity_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const scanfit_angles: (a: number) => [number, number];
export const scanfit_curve: (a: number, b: number) => [number, number];
export const scanfit_phase_deg: (a: number) => number;
export const scanfit_sigma_uev: (a: number) => number;
export const scanfit_splitting_uev: (a: number) => number;
export const scanfit_values: (a: number) => [number, number];
export const scanfit_verdict: (a: number) => number;
export const simulate_and_fit: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number];
export const werner_correlations: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
