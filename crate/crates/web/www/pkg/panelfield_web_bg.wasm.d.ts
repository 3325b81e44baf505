/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_platesolution_free: (a: number, b: number) => void;
export const diagonalScan: (a: number, b: number) => [number, number, number, number];
export const evaluate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const platesolution_capacitance: (a: number) => number;
export const platesolution_cells: (a: number) => [number, number];
export const platesolution_residual: (a: number) => number;
export const solvePlate: (a: number, b: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
