/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const cerny: (a: number) => [number, number, number, number];
export const decide_report: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const fixture: (a: number, b: number) => [number, number, number, number];
export const fixture_names: () => [number, number];
export const sync_word: (a: number, b: number) => [number, number, number, number];
export const uniform_norms: (a: number, b: number, c: number) => [number, number, number, number];
export const witness_norms: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_start: () => void;
