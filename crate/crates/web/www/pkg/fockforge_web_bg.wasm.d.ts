/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const spin_boson: (a: number, b: number, c: number) => [number, number];
export const squeezed_vacuum: (a: number, b: number) => [number, number];
export const thermal_occupation: (a: number, b: number, c: number, d: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
