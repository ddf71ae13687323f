/* tslint:disable */
/* eslint-disable */

export class PlaneSolution {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Row-major, 1 for an incidence.
     */
    readonly cells: Uint8Array;
    readonly clauses: number;
    readonly side: number;
    readonly variables: number;
}

/**
 * Whether the encoding admits `x` and `y` (bit strings of equal length),
 * next to the direct comparison.
 */
export function lex_le_check(x: string, y: string): string;

/**
 * The clauses for `x ≤lex y` over `n` bits, one per line.
 */
export function lex_le_listing(n: number): string;

/**
 * Orbit and stabilizer of `assignment` (one symbol per point) under the
 * group generated by `generators` (cycle notation, 1-based, one per line).
 */
export function orbit_report(generators: string, assignment: string): string;

/**
 * Encodes and solves a plane of order 2..=5. `canonical` is `none`,
 * `frame` or `normalized`.
 */
export function solve_plane(order: number, canonical: string): PlaneSolution;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_planesolution_free: (a: number, b: number) => void;
    readonly lex_le_check: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly lex_le_listing: (a: number) => [number, number, number, number];
    readonly orbit_report: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly planesolution_cells: (a: number) => [number, number];
    readonly planesolution_clauses: (a: number) => number;
    readonly planesolution_side: (a: number) => number;
    readonly planesolution_variables: (a: number) => number;
    readonly solve_plane: (a: number, b: number, c: number) => [number, number, number];
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
