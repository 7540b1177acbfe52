//! The embedded stratum table: fifty records tying together root lattices,
//! Mordell-Weil torsion, modular monodromy data, branching passports,
//! permutation triples, and the moduli counting indices, together with the
//! verifier that checks their mutual consistency through every other
//! module.

pub mod verify;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::congruence::{mod4_groups, CongruenceSpec, ModularGroup};
use crate::fibers::{FiberConfiguration, FiberType};
use crate::lattices::AbelianType;
use crate::perm::Perm;
use crate::permcover::PermTriple;
use crate::roots::RootSum;

/// The embedded catalog file and its pinned digest.
pub const CATALOG_JSON: &str = include_str!("../../../../catalog/strata.v1.json");
pub const CATALOG_SHA256: &str = include_str!("../../../../catalog/strata.v1.sha256");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog checksum mismatch: expected {expected}, found {found}")]
    Checksum { expected: String, found: String },
    #[error("malformed catalog: {0}")]
    Malformed(String),
    #[error("row {0} out of range")]
    RowOutOfRange(usize),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchPole {
    pub order: usize,
    pub parts: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleRecord {
    pub mu0: String,
    pub mu1: String,
    pub muinf: String,
}

/// Index data of the orthogonal-complement computation: the indices
/// `i1 = [O+(T) : stableO+(T)]`, `i2 = [stableO(T) : stableO+(T)]`,
/// `i3 = [O(D(T)) : imageO(T)]`, the order of the diagram-symmetry image
/// modulo sign, and the genus of the covering modular curve.  These are
/// reference values consumed by the counting identities, not recomputed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AppendixRecord {
    pub i1: u64,
    pub i2: u64,
    pub i3: u64,
    pub sbar_m: u64,
    pub genus: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoveringRecord {
    pub components: u64,
    pub degree: u64,
    pub conjugate_pair: bool,
}

/// One catalog row.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StratumRecord {
    pub id: usize,
    pub roots: String,
    pub mw: [i64; 2],
    pub dim: i64,
    /// Index of the modular monodromy group in PSL(2,Z) = degree of the
    /// quotient map.
    pub ind: u32,
    /// Size of the kernel of the monodromy group onto its modular image
    /// (2 exactly when -id belongs to the monodromy).
    pub ker: u32,
    pub congruence: bool,
    pub gbar: String,
    pub passport: [Vec<usize>; 3],
    pub je_deg: usize,
    pub n_star: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shimada: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monodromy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jrow: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wfamily: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_a: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_b: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_pole: Option<BranchPole>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub glue: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<TripleRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub appendix: Option<AppendixRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covering: Option<CoveringRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embeddings: Option<u64>,
}

impl StratumRecord {
    pub fn root_sum(&self) -> RootSum {
        RootSum::parse(&self.roots).expect("catalog root symbols are valid")
    }

    pub fn mw_type(&self) -> AbelianType {
        AbelianType::new(self.mw[0], self.mw[1])
    }

    /// The monodromy group when explicit congruence data exists (the
    /// low-index rows).
    pub fn modular_group(&self) -> Option<ModularGroup> {
        let g = match self.monodromy.as_deref()? {
            "full" => ModularGroup::Full,
            "gamma1_2" => ModularGroup::Spec(CongruenceSpec::Gamma1(2)),
            "gamma1_3" => ModularGroup::Spec(CongruenceSpec::Gamma1(3)),
            "gamma0_4" => ModularGroup::Spec(CongruenceSpec::Gamma0(4)),
            "gamma_2" => ModularGroup::Spec(CongruenceSpec::Gamma(2)),
            "gamma1_4" => ModularGroup::Spec(CongruenceSpec::Gamma1(4)),
            "cyclic_mod4" => mod4_groups::cyclic_mod4(),
            "klein_mod4" => mod4_groups::klein_mod4(),
            other => panic!("unknown monodromy tag {other:?}"),
        };
        Some(g)
    }

    pub fn perm_triple(&self) -> Option<PermTriple> {
        let t = self.triple.as_ref()?;
        let d = self.ind as usize;
        let mu0 = Perm::parse(d, &t.mu0).ok()?;
        let mu1 = Perm::parse(d, &t.mu1).ok()?;
        let muinf = Perm::parse(d, &t.muinf).ok()?;
        PermTriple::new(mu0, mu1, muinf).ok()
    }

    /// The generic singular-fiber configuration encoded by the branching
    /// data: over each pole of the quotient map of width `w`, the second
    /// factor contributes fibers `I_{m w}` with `m` running over its local
    /// partition (trivial except at the designated pole), plus the `I_0*`
    /// fibers.
    pub fn fiber_configuration(&self) -> FiberConfiguration {
        let mut counts: Vec<(FiberType, u32)> = Vec::new();
        let mut pole_branch_used = false;
        for &w in &self.passport[2] {
            let parts: Vec<usize> = match &self.branch_pole {
                Some(bp) if bp.order == w && !pole_branch_used => {
                    pole_branch_used = true;
                    bp.parts.clone()
                }
                _ => vec![1; self.je_deg],
            };
            for m in parts {
                counts.push((FiberType::I((m * w) as u32), 1));
            }
        }
        counts.push((FiberType::IStar(0), self.n_star));
        FiberConfiguration::new(counts)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Catalog {
    pub version: String,
    pub rows: Vec<StratumRecord>,
}

impl Catalog {
    /// The embedded catalog, with its checksum enforced.
    pub fn embedded() -> Catalog {
        let found = hex_digest(CATALOG_JSON.as_bytes());
        let expected = CATALOG_SHA256.trim();
        assert_eq!(found, expected, "embedded catalog does not match its digest");
        serde_json::from_str(CATALOG_JSON).expect("embedded catalog parses")
    }

    /// Loads a catalog from a file path (digest of external files is
    /// reported but not enforced).
    pub fn load(path: &std::path::Path) -> Result<Catalog, CatalogError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| CatalogError::Malformed(e.to_string()))
    }

    pub fn row(&self, id: usize) -> Result<&StratumRecord, CatalogError> {
        self.rows.get(id).ok_or(CatalogError::RowOutOfRange(id))
    }

    pub fn digest() -> String {
        hex_digest(CATALOG_JSON.as_bytes())
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
