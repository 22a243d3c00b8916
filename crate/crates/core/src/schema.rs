//! TOML file formats for paths, bases, systems and certificates.
//!
//! Unknown fields are rejected. Rationals are strings `"p/q"` or integers.

use serde::{Deserialize, Serialize};

use crate::certify::{Flag, IndexSign, OrbitModel, SystemModel};
use crate::error::{Error, Result};
use crate::homology::BaseManifold;
use crate::index::{self, PathModel};
use crate::jump::{JumpCertificate, JumpParams};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    #[serde(default)]
    pub loop_maslov: i64,
    #[serde(default)]
    pub elliptic: Vec<String>,
    #[serde(default)]
    pub hyperbolic: Vec<i64>,
    pub nondeg_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsSpec {
    pub paths: Vec<PathSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub n: usize,
    pub betti: Vec<u64>,
    #[serde(rename = "c_B")]
    pub c_b: u64,
    pub monotone_sign: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSpec {
    pub label: String,
    pub period: String,
    pub path: PathSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub index_sign: String,
    #[serde(default)]
    pub flags: Vec<String>,
    pub base: BaseSpec,
    pub orbits: Vec<OrbitSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateSpec {
    pub d_plus: i64,
    pub k_plus: Vec<u64>,
    pub d_minus: i64,
    pub k_minus: Vec<u64>,
    pub eta: String,
    pub ell0: u64,
    pub divisor: u64,
}

pub fn from_toml<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_toml<T: Serialize>(value: &T) -> Result<String> {
    toml::to_string(value).map_err(|e| Error::Parse(e.to_string()))
}

impl PathSpec {
    pub fn to_model(&self) -> Result<PathModel> {
        let elliptic = self
            .elliptic
            .iter()
            .map(|s| rational::parse_rational(s))
            .collect::<Result<Vec<Rational>>>()?;
        index::validate_path(
            &PathModel::new(self.loop_maslov, elliptic, self.hyperbolic.clone()),
            self.nondeg_bound,
        )
    }

    pub fn from_model(path: &PathModel) -> Self {
        Self {
            loop_maslov: path.loop_maslov(),
            elliptic: path.elliptic().iter().map(rational::fmt_rational).collect(),
            hyperbolic: path.hyperbolic().to_vec(),
            nondeg_bound: path.nondeg_bound(),
        }
    }
}

impl PathsSpec {
    pub fn to_models(&self) -> Result<Vec<PathModel>> {
        self.paths.iter().map(PathSpec::to_model).collect()
    }
}

impl BaseSpec {
    pub fn to_model(&self) -> Result<BaseManifold> {
        BaseManifold::new(self.n, self.betti.clone(), self.c_b, self.monotone_sign.parse()?)
    }

    pub fn from_model(base: &BaseManifold) -> Self {
        Self {
            n: base.n(),
            betti: base.betti().to_vec(),
            c_b: base.chern_min(),
            monotone_sign: base.monotone_sign().to_string(),
        }
    }
}

impl SystemSpec {
    pub fn to_model(&self) -> Result<SystemModel> {
        let orbits = self
            .orbits
            .iter()
            .map(|o| {
                Ok(OrbitModel {
                    label: o.label.clone(),
                    path: o.path.to_model()?,
                    period: rational::parse_rational(&o.period)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let flags = self
            .flags
            .iter()
            .map(|f| f.parse::<Flag>())
            .collect::<Result<_>>()?;
        SystemModel::new(orbits, self.base.to_model()?, self.index_sign.parse::<IndexSign>()?, flags)
    }

    pub fn from_model(system: &SystemModel) -> Self {
        Self {
            index_sign: system.index_sign.to_string(),
            flags: system.flags.iter().map(|f| f.to_string()).collect(),
            base: BaseSpec::from_model(&system.base),
            orbits: system
                .orbits
                .iter()
                .map(|o| OrbitSpec {
                    label: o.label.clone(),
                    period: rational::fmt_rational(&o.period),
                    path: PathSpec::from_model(&o.path),
                })
                .collect(),
        }
    }
}

impl CertificateSpec {
    pub fn to_model(&self) -> Result<JumpCertificate> {
        Ok(JumpCertificate {
            d_plus: self.d_plus,
            k_plus: self.k_plus.clone(),
            d_minus: self.d_minus,
            k_minus: self.k_minus.clone(),
            params: JumpParams::new(rational::parse_rational(&self.eta)?, self.ell0, self.divisor, 1),
        })
    }

    pub fn from_model(cert: &JumpCertificate) -> Self {
        Self {
            d_plus: cert.d_plus,
            k_plus: cert.k_plus.clone(),
            d_minus: cert.d_minus,
            k_minus: cert.k_minus.clone(),
            eta: rational::fmt_rational(&cert.params.eta),
            ell0: cert.params.ell0,
            divisor: cert.params.divisor,
        }
    }
}
