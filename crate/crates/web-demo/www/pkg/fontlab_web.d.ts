/* tslint:disable */
/* eslint-disable */

/**
 * A grayscale image ready for `ImageData`.
 */
export class Frame {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    rgba(): Uint8Array;
    readonly height: number;
    readonly width: number;
}

/**
 * Full render, channel, recognize and score run, as JSON with per-character
 * counters, the aggregate CER and every hit.
 */
export function evaluate_text(font_name: string, text: string, scale: number, standard: string, snr_db: number, bw_frac: number, seed: number, threshold: number, targets: string): string;

/**
 * The screen image and what the eavesdropper receives, stacked vertically.
 */
export function render_emission(font_name: string, text: string, scale: number, standard: string, snr_db: number, bw_frac: number, seed: number): Frame;

/**
 * Pairwise template similarity under a noiseless channel, as JSON
 * `{labels, values, fraction_above, mean}`.
 */
export function template_similarity(font_name: string, standard: string, bw_frac: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_frame_free: (a: number, b: number) => void;
    readonly evaluate_text: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: number, l: number, m: number) => [number, number, number, number];
    readonly frame_height: (a: number) => number;
    readonly frame_rgba: (a: number) => [number, number];
    readonly frame_width: (a: number) => number;
    readonly render_emission: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number];
    readonly template_similarity: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
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
