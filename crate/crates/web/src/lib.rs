//! Browser demo: three small computations exposed through wasm-bindgen.
//! The plain functions are target-independent; the `wasm` module wraps them
//! and returns JSON strings.

use fockforge_core::bogolubov::{intertwining_residual, shale_implementer, BogolubovBlocks};
use fockforge_core::fock::{FockSpace, Statistics};
use fockforge_core::linalg::{c, eigvalsh, CMat, CVec};
use fockforge_core::pauli_fierz::{self as pf, PauliFierzModel};
use fockforge_core::thermal::{left_two_point, left_two_point_closed, DoubledRep, ThermalParams};
use serde::Serialize;

/// Largest bosonic cutoffs accepted from the page.
pub const MAX_SQUEEZE_CUTOFF: usize = 60;
pub const MAX_THERMAL_CUTOFF: usize = 12;
pub const MAX_PF_CUTOFF: usize = 10;

#[derive(Debug, Serialize)]
pub struct Squeezed {
    /// |(n|U_t Ω)|² for n = 0..=cutoff.
    pub probabilities: Vec<f64>,
    pub mean_photons: f64,
    pub mean_photons_exact: f64,
    pub intertwining_residual: f64,
}

/// Photon statistics of the squeezed vacuum U_t Ω for the one-mode squeeze
/// p = cosh t, q = sinh t.
pub fn squeezed_vacuum(t: f64, cutoff: usize) -> Result<Squeezed, String> {
    if !t.is_finite() || cutoff == 0 || cutoff > MAX_SQUEEZE_CUTOFF {
        return Err(format!("need finite t and 1 ≤ cutoff ≤ {MAX_SQUEEZE_CUTOFF}"));
    }
    let space = FockSpace::bose(1, cutoff).map_err(|e| e.to_string())?;
    let blocks = BogolubovBlocks::squeeze(t);
    let u = shale_implementer(&space, &blocks).map_err(|e| e.to_string())?;
    let psi = &u * space.vacuum();
    let mut probabilities = vec![0.0; cutoff + 1];
    for (s, amp) in psi.iter().enumerate() {
        probabilities[space.occupation(s)[0] as usize] += amp.norm_sqr();
    }
    let mean_photons = probabilities.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let z = CVec::from_element(1, c(1.0, 0.0));
    let residual = intertwining_residual(&space, &blocks, &u, &z).map_err(|e| e.to_string())?;
    Ok(Squeezed {
        probabilities,
        mean_photons,
        mean_photons_exact: t.sinh().powi(2),
        intertwining_residual: residual,
    })
}

#[derive(Debug, Serialize)]
pub struct Occupation {
    /// (Ω|a*_l(1) a_l(1)Ω) in the doubled representation.
    pub computed: f64,
    /// 1/(e^{βε} ∓ 1).
    pub closed_form: f64,
}

/// Thermal occupation of a single mode of energy `energy` at inverse temperature `beta`.
pub fn thermal_occupation(fermi: bool, beta: f64, energy: f64, cutoff: usize) -> Result<Occupation, String> {
    if !(beta.is_finite() && beta > 0.0 && energy.is_finite() && energy > 0.0) {
        return Err("need positive finite beta and energy".into());
    }
    if cutoff == 0 || cutoff > MAX_THERMAL_CUTOFF {
        return Err(format!("need 1 ≤ cutoff ≤ {MAX_THERMAL_CUTOFF}"));
    }
    let stat = if fermi { Statistics::Fermi } else { Statistics::Bose };
    let h = CMat::from_element(1, 1, c(energy, 0.0));
    let params = ThermalParams::thermal(stat, &h, beta).map_err(|e| e.to_string())?;
    let z = CVec::from_element(1, c(1.0, 0.0));
    let closed = left_two_point_closed(&params, &z, &z)[2].re;
    let rep = DoubledRep::new(params, if fermi { 1 } else { cutoff }).map_err(|e| e.to_string())?;
    let computed = left_two_point(&rep, &z, &z).map_err(|e| e.to_string())?[2].re;
    Ok(Occupation {
        computed,
        closed_form: closed,
    })
}

#[derive(Debug, Serialize)]
pub struct SpinBoson {
    /// Lowest eigenvalues of the Hamiltonian, at most six.
    pub energies: Vec<f64>,
    pub semi_deviation: f64,
    pub standard_deviation: f64,
    pub window: f64,
}

/// K = σ₃, h = 1, v = λσ₁, density γ: lowest levels of H and the spectral
/// comparison of both Liouvilleans with the difference spectrum of H.
pub fn spin_boson(coupling: f64, gamma: f64, cutoff: usize) -> Result<SpinBoson, String> {
    if cutoff == 0 || cutoff > MAX_PF_CUTOFF {
        return Err(format!("need 1 ≤ cutoff ≤ {MAX_PF_CUTOFF}"));
    }
    let model = PauliFierzModel::spin_boson(coupling, Some(gamma), cutoff).map_err(|e| e.to_string())?;
    let h = pf::hamiltonian(&model).map_err(|e| e.to_string())?;
    let mut energies = eigvalsh(&h).map_err(|e| e.to_string())?;
    energies.truncate(6);
    let r = pf::confined_pf_check(&model).map_err(|e| e.to_string())?;
    Ok(SpinBoson {
        energies,
        semi_deviation: r.semi_deviation,
        standard_deviation: r.standard_deviation,
        window: r.window,
    })
}

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).expect("serializable"),
        Err(e) => serde_json::json!({ "error": e }).to_string(),
    }
}

pub fn squeezed_vacuum_json(t: f64, cutoff: usize) -> String {
    to_json(squeezed_vacuum(t, cutoff))
}

pub fn thermal_occupation_json(fermi: bool, beta: f64, energy: f64, cutoff: usize) -> String {
    to_json(thermal_occupation(fermi, beta, energy, cutoff))
}

pub fn spin_boson_json(coupling: f64, gamma: f64, cutoff: usize) -> String {
    to_json(spin_boson(coupling, gamma, cutoff))
}

#[cfg(target_arch = "wasm32")]
mod wasm {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen]
    pub fn squeezed_vacuum(t: f64, cutoff: usize) -> String {
        super::squeezed_vacuum_json(t, cutoff)
    }

    #[wasm_bindgen]
    pub fn thermal_occupation(fermi: bool, beta: f64, energy: f64, cutoff: usize) -> String {
        super::thermal_occupation_json(fermi, beta, energy, cutoff)
    }

    #[wasm_bindgen]
    pub fn spin_boson(coupling: f64, gamma: f64, cutoff: usize) -> String {
        super::spin_boson_json(coupling, gamma, cutoff)
    }
}
