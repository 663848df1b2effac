/* tslint:disable */
/* eslint-disable */

export function cerny(n: number): string;

export function decide_report(model: string, mode: string, objective: string): string;

export function fixture(name: string): string;

export function fixture_names(): string[];

export function sync_word(model: string): string;

export function uniform_norms(model: string, steps: number): Float64Array;

export function witness_norms(model: string, mode: string, objective: string, steps: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly cerny: (a: number) => [number, number, number, number];
    readonly decide_report: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly fixture: (a: number, b: number) => [number, number, number, number];
    readonly fixture_names: () => [number, number];
    readonly sync_word: (a: number, b: number) => [number, number, number, number];
    readonly uniform_norms: (a: number, b: number, c: number) => [number, number, number, number];
    readonly witness_norms: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_drop_slice: (a: number, b: number) => void;
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
