//! On-disk formats: instance files and family files.
//!
//! An instance file is the mixed-Hodge document (dim, ranges, filtrations as
//! basis matrices) extended with the operator "N", the "pairing" Gram matrix,
//! "h", and an optional "case_hint". A family file references its instance
//! and carries per-section coefficient polynomials for both family kinds.
//! All scalars use the string forms of the exact types ("p/q" rationals,
//! two-element Gaussian arrays); generating sets are canonicalized on load.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::exact::ExactMatrix;
use crate::lmhs::{CaseFlag, IntersectionForm, LimitingMHS, LmhsError};
use crate::mhs::MixedHodgeStructure;
use crate::orbit::{FamilyKind, OrbitError, PerturbationFamily, SectionCoeffs};

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Lmhs(#[from] LmhsError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// Instance document: a limiting mixed Hodge structure plus an optional
/// case hint (advisory only; classification is always recomputed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub lmhs: LimitingMHS,
    pub case_hint: Option<CaseFlag>,
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    #[serde(flatten)]
    mhs: MixedHodgeStructure,
    #[serde(rename = "N")]
    n: ExactMatrix,
    pairing: ExactMatrix,
    h: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    case_hint: Option<CaseFlag>,
}

impl Serialize for InstanceFile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        InstanceRepr {
            mhs: self.lmhs.mhs().clone(),
            n: self.lmhs.n_op().clone(),
            pairing: self.lmhs.pairing().gram().clone(),
            h: self.lmhs.h(),
            case_hint: self.case_hint,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for InstanceFile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = InstanceRepr::deserialize(d)?;
        let pairing = IntersectionForm::new(repr.pairing).map_err(serde::de::Error::custom)?;
        let lmhs = LimitingMHS::new(repr.mhs, repr.n, pairing, repr.h)
            .map_err(serde::de::Error::custom)?;
        Ok(InstanceFile {
            lmhs,
            case_hint: repr.case_hint,
        })
    }
}

impl InstanceFile {
    pub fn new(lmhs: LimitingMHS, case_hint: Option<CaseFlag>) -> Self {
        InstanceFile { lmhs, case_hint }
    }
}

/// Family document: instance reference plus the coefficient polynomials of
/// both family kinds.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyFile {
    /// Path of the instance this family was generated against (as given).
    pub instance: String,
    pub f2_degree: u32,
    pub f2_sections: Vec<SectionCoeffs>,
    pub h21_degree: u32,
    pub h21_sections: Vec<SectionCoeffs>,
}

impl FamilyFile {
    pub fn from_families(
        instance_ref: impl Into<String>,
        f2: &PerturbationFamily,
        h21: &PerturbationFamily,
    ) -> Self {
        FamilyFile {
            instance: instance_ref.into(),
            f2_degree: f2.degree_cap(),
            f2_sections: f2.sections().to_vec(),
            h21_degree: h21.degree_cap(),
            h21_sections: h21.sections().to_vec(),
        }
    }

    /// Rebuild the F²-family over the given instance, revalidating the
    /// constant-term invariants against the derived bases.
    pub fn f2_family(&self, lmhs: &LimitingMHS) -> Result<PerturbationFamily, OrbitError> {
        PerturbationFamily::new(
            lmhs.clone(),
            FamilyKind::F2,
            self.f2_sections.clone(),
            self.f2_degree,
        )
    }

    pub fn h21_family(&self, lmhs: &LimitingMHS) -> Result<PerturbationFamily, OrbitError> {
        PerturbationFamily::new(
            lmhs.clone(),
            FamilyKind::H21,
            self.h21_sections.clone(),
            self.h21_degree,
        )
    }
}

fn io_err(path: &Path, source: std::io::Error) -> FileError {
    FileError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, source: serde_json::Error) -> FileError {
    FileError::Parse {
        path: path.display().to_string(),
        source,
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FileError> {
    let mut body = serde_json::to_string_pretty(value).map_err(|e| parse_err(path, e))?;
    body.push('\n');
    fs::write(path, body).map_err(|e| io_err(path, e))
}

pub fn read_instance(path: &Path) -> Result<InstanceFile, FileError> {
    let body = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&body).map_err(|e| parse_err(path, e))
}

pub fn read_family(path: &Path) -> Result<FamilyFile, FileError> {
    let body = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&body).map_err(|e| parse_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmhs::gen_instance;
    use crate::orbit::{gen_f2_family, gen_h21_family};

    use crate::lmhs::CaseFlag;

    #[test]
    fn instance_round_trip() {
        let inst = gen_instance(1, CaseFlag::II, 44);
        let file = InstanceFile::new(inst.clone(), Some(CaseFlag::II));
        let body = serde_json::to_string_pretty(&file).unwrap();
        let back: InstanceFile = serde_json::from_str(&body).unwrap();
        assert_eq!(back.lmhs, inst);
        assert_eq!(back.case_hint, Some(CaseFlag::II));
    }

    #[test]
    fn family_round_trip() {
        let inst = gen_instance(1, CaseFlag::I, 45);
        let f2 = gen_f2_family(&inst, 1, 2).unwrap();
        let h21 = gen_h21_family(&f2, 2).unwrap();
        let file = FamilyFile::from_families("inst.json", &f2, &h21);
        let body = serde_json::to_string(&file).unwrap();
        let back: FamilyFile = serde_json::from_str(&body).unwrap();
        assert_eq!(back, file);
        let f2_again = back.f2_family(&inst).unwrap();
        assert_eq!(f2_again.sections(), f2.sections());
    }
}
