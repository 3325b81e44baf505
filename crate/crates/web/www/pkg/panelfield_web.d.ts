/* tslint:disable */
/* eslint-disable */

/**
 * Unit-potential solution on the unit square plate.
 */
export class PlateSolution {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `[x0, z0, x1, z1, density]` per panel, flattened.
     */
    cells(): Float64Array;
    readonly capacitance: number;
    /**
     * Largest residual of the dense solve.
     */
    readonly residual: number;
}

export function diagonalScan(samples: number, m: number): Float64Array;

export function evaluate(x1: number, z1: number, x2: number, z2: number, x: number, y: number, z: number): Float64Array;

export function solvePlate(n: number, ratio: number): PlateSolution;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_platesolution_free: (a: number, b: number) => void;
    readonly diagonalScan: (a: number, b: number) => [number, number, number, number];
    readonly evaluate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly platesolution_capacitance: (a: number) => number;
    readonly platesolution_cells: (a: number) => [number, number];
    readonly platesolution_residual: (a: number) => number;
    readonly solvePlate: (a: number, b: number) => [number, number, number];
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
