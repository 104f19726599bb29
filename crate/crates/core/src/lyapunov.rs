//! `V(x) = max_i σ_i^{-1}(V_i(x_i))` built from a verified Ω-path.

use std::cmp::Ordering;

use crate::algebra::{InverseGain, Scalar};
use crate::error::{Error, Result};
use crate::omega::OmegaPath;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LyapunovDescriptor {
    inverses: Vec<InverseGain>,
    source: OmegaPath,
}

pub fn build_descriptor(sigma: &OmegaPath) -> Result<LyapunovDescriptor> {
    if !sigma.is_verified() {
        return Err(Error::UnverifiedPath);
    }
    let inverses = sigma
        .components()
        .iter()
        .map(|g| g.invert())
        .collect::<Result<Vec<_>>>()?;
    Ok(LyapunovDescriptor {
        inverses,
        source: sigma.clone(),
    })
}

impl LyapunovDescriptor {
    pub fn labels(&self) -> &[String] {
        self.source.labels()
    }

    pub fn inverses(&self) -> &[InverseGain] {
        &self.inverses
    }

    pub fn source(&self) -> &OmegaPath {
        &self.source
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.inverses.len() {
            return Err(Error::LengthMismatch {
                expected: self.inverses.len(),
                found: n,
            });
        }
        Ok(())
    }

    /// `max_i σ_i^{-1}(v_i)` in floating point.
    pub fn evaluate(&self, v: &[f64]) -> Result<f64> {
        self.check_len(v.len())?;
        if let Some(x) = v.iter().find(|x| x.is_nan() || **x < 0.0) {
            return Err(Error::InvalidCoefficient(format!("value {x} is negative")));
        }
        Ok(self
            .inverses
            .iter()
            .zip(v)
            .map(|(inv, &x)| inv.evaluate(x))
            .fold(0.0, f64::max))
    }

    /// Exact counterpart of [`evaluate`](Self::evaluate).
    pub fn evaluate_exact(&self, v: &[Scalar]) -> Result<Scalar> {
        self.check_len(v.len())?;
        let mut best = Scalar::Zero;
        for (inv, x) in self.inverses.iter().zip(v) {
            let y = inv.evaluate_exact(x)?;
            if y.try_cmp(&best)? == Ordering::Greater {
                best = y;
            }
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Coefficient, GainFunction};
    use crate::graph::NetworkDraft;
    use crate::omega::verify_omega_path;

    fn verified(gains: Vec<GainFunction>) -> OmegaPath {
        let mut d = NetworkDraft::default();
        for i in 0..gains.len() {
            d = d.node(format!("{i}"));
        }
        let net = d.build().unwrap();
        let mut p = OmegaPath::new(&net, gains).unwrap();
        assert!(verify_omega_path(&net, &mut p).unwrap().is_empty());
        p
    }

    #[test]
    fn identity_descriptor() {
        let d = build_descriptor(&verified(vec![GainFunction::identity(); 3])).unwrap();
        assert_eq!(d.evaluate(&[1.0, 3.0, 2.0]).unwrap(), 3.0);
        assert_eq!(d.evaluate(&[0.0; 3]).unwrap(), 0.0);
        assert!(matches!(d.evaluate(&[1.0]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn inverses_of_power_terms() {
        let d = build_descriptor(&verified(vec![
            GainFunction::power((4, 1), (2, 1)).unwrap(),
            GainFunction::power((2, 5), (1, 1)).unwrap(),
        ]))
        .unwrap();
        assert_eq!(d.inverses()[0].to_string(), "1/2·t^(1/2)");
        assert_eq!(d.inverses()[1].to_string(), "5/2·t");
    }

    #[test]
    fn unverified_is_rejected() {
        let net = NetworkDraft::default().node("a").build().unwrap();
        let p = OmegaPath::new(&net, vec![GainFunction::identity()]).unwrap();
        assert!(matches!(build_descriptor(&p), Err(Error::UnverifiedPath)));
    }

    #[test]
    fn exact_normalisation() {
        let sigma = verified(vec![
            GainFunction::power((4, 1), (2, 1)).unwrap(),
            GainFunction::power((2, 5), (1, 1)).unwrap(),
            GainFunction::power((1, 3), (1, 2))
                .unwrap()
                .max(&GainFunction::power((3, 1), (2, 1)).unwrap())
                .unwrap(),
        ]);
        let d = build_descriptor(&sigma).unwrap();
        let t0 = Scalar::Positive(Coefficient::from_fraction(17, 3).unwrap());
        let v: Vec<Scalar> = sigma
            .components()
            .iter()
            .map(|g| g.evaluate_exact(&t0).unwrap())
            .collect();
        assert_eq!(d.evaluate_exact(&v).unwrap(), t0);
    }
}
