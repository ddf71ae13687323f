/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_planesolution_free: (a: number, b: number) => void;
export const lex_le_check: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const lex_le_listing: (a: number) => [number, number, number, number];
export const orbit_report: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const planesolution_cells: (a: number) => [number, number];
export const planesolution_clauses: (a: number) => number;
export const planesolution_side: (a: number) => number;
export const planesolution_variables: (a: number) => number;
export const solve_plane: (a: number, b: number, c: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
