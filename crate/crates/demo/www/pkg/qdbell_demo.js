/* @ts-self-types="./qdbell_demo.d.ts" */

/**
 * A simulated splitting scan and its least-squares fit.
 */
export class ScanFit {
    static __wrap(ptr) {
        const obj = Object.create(ScanFit.prototype);
        obj.__wbg_ptr = ptr;
        ScanFitFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        ScanFitFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_scanfit_free(ptr, 0);
    }
    /**
     * @returns {Float64Array}
     */
    angles() {
        const ret = wasm.scanfit_angles(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * The fitted curve at `points` angles evenly spaced over `[0°, 180°)`.
     * @param {number} points
     * @returns {Float64Array}
     */
    curve(points) {
        const ret = wasm.scanfit_curve(this.__wbg_ptr, points);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get phase_deg() {
        const ret = wasm.scanfit_phase_deg(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get sigma_uev() {
        const ret = wasm.scanfit_sigma_uev(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get splitting_uev() {
        const ret = wasm.scanfit_splitting_uev(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {Float64Array}
     */
    values() {
        const ret = wasm.scanfit_values(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * Whether the splitting is below 0.5 µeV by more than twice its error.
     * @returns {boolean}
     */
    get verdict() {
        const ret = wasm.scanfit_verdict(this.__wbg_ptr);
        return ret !== 0;
    }
}
if (Symbol.dispose) ScanFit.prototype[Symbol.dispose] = ScanFit.prototype.free;

/**
 * `[C_rect, C_diag, C_circ, f, S_RC, S_DC, S_RD]` predicted for the
 * calibrated source with the given splitting, exciton lifetime and noise
 * scale (1 reproduces the calibrated noise, 0 removes it).
 * @param {number} splitting_uev
 * @param {number} tau_x_ns
 * @param {number} noise_scale
 * @param {boolean} gated
 * @returns {Float64Array}
 */
export function bell_parameters(splitting_uev, tau_x_ns, noise_scale, gated) {
    const ret = wasm.bell_parameters(splitting_uev, tau_x_ns, noise_scale, gated);
    if (ret[3]) {
        throw takeFromExternrefTable0(ret[2]);
    }
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}

/**
 * The four correlations `E(α,β), E(α′,β), E(α,β′), E(α′,β′)` of a Werner
 * state with the given visibility, for half-wave plates ahead of vertical
 * polarizers, followed by the CHSH value and the largest CHSH value any
 * settings could reach: `[E₁, E₂, E₃, E₄, S, S_max]`.
 * @param {number} xx_a_deg
 * @param {number} xx_b_deg
 * @param {number} x_a_deg
 * @param {number} x_b_deg
 * @param {number} visibility
 * @returns {Float64Array}
 */
export function chsh_explorer(xx_a_deg, xx_b_deg, x_a_deg, x_b_deg, visibility) {
    const ret = wasm.chsh_explorer(xx_a_deg, xx_b_deg, x_a_deg, x_b_deg, visibility);
    if (ret[3]) {
        throw takeFromExternrefTable0(ret[2]);
    }
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}

/**
 * Fidelity at `points` splittings evenly spaced over `[0, max_splitting_uev]`.
 * @param {number} tau_x_ns
 * @param {number} noise_scale
 * @param {boolean} gated
 * @param {number} max_splitting_uev
 * @param {number} points
 * @returns {Float64Array}
 */
export function fidelity_curve(tau_x_ns, noise_scale, gated, max_splitting_uev, points) {
    const ret = wasm.fidelity_curve(tau_x_ns, noise_scale, gated, max_splitting_uev, points);
    if (ret[3]) {
        throw takeFromExternrefTable0(ret[2]);
    }
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}

/**
 * @param {number} splitting_uev
 * @param {number} phase_deg
 * @param {number} noise_uev
 * @param {number} points
 * @param {bigint} seed
 * @returns {ScanFit}
 */
export function simulate_and_fit(splitting_uev, phase_deg, noise_uev, points, seed) {
    const ret = wasm.simulate_and_fit(splitting_uev, phase_deg, noise_uev, points, seed);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return ScanFit.__wrap(ret[0]);
}

/**
 * Degrees of correlation `[C_rect, C_diag, C_circ]` of a Werner state.
 * @param {number} visibility
 * @returns {Float64Array}
 */
export function werner_correlations(visibility) {
    const ret = wasm.werner_correlations(visibility);
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_generic_0000000000000001: function(arg0, arg1) {
            // Cast intrinsic for `Ref(String) -> Externref`.
            const ret = getStringFromWasm0(arg0, arg1);
            return ret;
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./qdbell_demo_bg.js": import0,
    };
}

const ScanFitFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_scanfit_free(ptr, 1));

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('qdbell_demo_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
