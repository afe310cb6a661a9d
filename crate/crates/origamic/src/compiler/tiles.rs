//! Axis-aligned tiles used by the crossbar layout, with their shapes,
//! relations on lane states and cached fold witnesses.
//!
//! Lane states here are canonical: rows are read travelling east and
//! columns travelling south, whatever way the signal actually flows.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use crate::crease_pattern::CreaseAssignment;
use crate::exec;
use crate::flat_fold_oracle::{self, OracleConfig};
use crate::gadgets::{self, Chirality, GadgetInstance, NaeHubVariant, Polarity, Pose};
use crate::geometry::{ExactPoint, ExactScalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TileKind {
    Hub(Chirality),
    NaeHub(NaeHubVariant),
    Crossing,
}

impl TileKind {
    pub fn name(self) -> String {
        match self {
            TileKind::Hub(Chirality::Plain) => "hub".into(),
            TileKind::Hub(Chirality::Mirrored) => "hub-mirrored".into(),
            TileKind::NaeHub(v) => format!("nae-hub-{v:?}").to_lowercase(),
            TileKind::Crossing => "crossing".into(),
        }
    }
}

/// Arm indices.
pub const W: usize = 0;
pub const N: usize = 1;
pub const E: usize = 2;
pub const S: usize = 3;

/// A crease inside a tile, in tile coordinates.
pub type CoreCrease = (ExactPoint, ExactPoint, CreaseAssignment);

#[derive(Debug, Clone)]
pub struct TileModel {
    pub kind: TileKind,
    pub gadget: GadgetInstance,
    /// Lower (rows) or left (columns) band edge of each arm.
    pub band_lo: [ExactScalar; 4],
    /// Where each arm's two creases start, lower/left first.
    pub arm_origins: [[ExactPoint; 2]; 4],
    pub core_min: ExactPoint,
    pub core_max: ExactPoint,
    /// Allowed canonical `(w, n, e, s)` lane states.
    pub canonical: BTreeSet<[u8; 4]>,
    witnesses: BTreeMap<[u8; 4], Vec<CoreCrease>>,
}

pub fn row_width() -> ExactScalar {
    ExactScalar::sqrt3()
}

pub fn col_width() -> ExactScalar {
    ExactScalar::one()
}

impl TileModel {
    fn build(kind: TileKind) -> TileModel {
        let o = Pose::default();
        let gadget = match kind {
            TileKind::Hub(c) => gadgets::make_hub(&o, c),
            TileKind::NaeHub(v) => gadgets::make_nae_hub(&o, v),
            TileKind::Crossing => gadgets::make_lane_crossing(&row_width(), &col_width()),
        }
        .expect("tile gadget builds");
        assert_eq!(gadget.ports.len(), 4);
        let f = &gadget.fragment;
        let mut arm_origins = Vec::new();
        let mut band_lo = Vec::new();
        for (i, port) in gadget.ports.iter().enumerate() {
            let horizontal = i % 2 == 0;
            let expected = if horizontal { row_width() } else { col_width() };
            assert_eq!(port.width, expected, "{} arm {i}", kind.name());
            // The arm's creases start at the interior end of its border creases.
            let mut o: Vec<ExactPoint> = port
                .creases
                .iter()
                .map(|&c| {
                    let [a, b] = f.creases()[c].v;
                    let inner = if f.is_border_vertex(a) { b } else { a };
                    f.vertices()[inner].clone()
                })
                .collect();
            o.sort_by(|p, q| if horizontal { p.y.cmp(&q.y) } else { p.x.cmp(&q.x) });
            band_lo.push(if horizontal { o[0].y.clone() } else { o[0].x.clone() });
            arm_origins.push([o[0].clone(), o[1].clone()]);
        }
        let interior: Vec<&ExactPoint> = f.interior_vertices().map(|v| &f.vertices()[v]).collect();
        let min = |k: fn(&ExactPoint) -> &ExactScalar| interior.iter().map(|p| k(p).clone()).min().expect("interior");
        let max = |k: fn(&ExactPoint) -> &ExactScalar| interior.iter().map(|p| k(p).clone()).max().expect("interior");
        let core_min = ExactPoint::new(min(|p| &p.x), min(|p| &p.y));
        let core_max = ExactPoint::new(max(|p| &p.x), max(|p| &p.y));

        let polarities: Vec<Polarity> = gadget.ports.iter().map(|p| p.polarity).collect();
        let canonical: BTreeSet<[u8; 4]> =
            gadget.relation.allowed.iter().map(|t| port_to_canonical(t, &polarities)).collect();

        let config = OracleConfig { face_limit: 64 };
        let geom = flat_fold_oracle::analyze(f, &config).expect("tile within oracle limits");
        let tuples: Vec<[u8; 4]> = canonical.iter().copied().collect();
        let found = exec::map(&tuples, |c| {
            let ports = canonical_to_port(c, &polarities);
            let d = geom.decide(f, &gadget.pins(&ports));
            let w = d.witness().unwrap_or_else(|| panic!("{} does not fold for {c:?}", kind.name()));
            f.creases()
                .iter()
                .enumerate()
                .filter(|(_, cr)| cr.v.iter().all(|&v| !f.is_border_vertex(v)))
                .map(|(i, cr)| (f.vertices()[cr.v[0]].clone(), f.vertices()[cr.v[1]].clone(), w.assignments[i]))
                .collect::<Vec<CoreCrease>>()
        });
        let witnesses = tuples.into_iter().zip(found).collect();
        TileModel {
            kind,
            gadget,
            band_lo: band_lo.try_into().expect("four arms"),
            arm_origins: arm_origins.try_into().expect("four arms"),
            core_min,
            core_max,
            canonical,
            witnesses,
        }
    }

    /// Row band shift from west to east.
    pub fn row_jog(&self) -> ExactScalar {
        &self.band_lo[E] - &self.band_lo[W]
    }

    /// Column band shift from north to south.
    pub fn col_jog(&self) -> ExactScalar {
        &self.band_lo[S] - &self.band_lo[N]
    }

    /// Interior creases assigned as in a fold of the tile with these lane states.
    pub fn witness(&self, canonical: &[u8; 4]) -> Option<&[CoreCrease]> {
        self.witnesses.get(canonical).map(|v| v.as_slice())
    }
}

/// Port states (in port order `L, U, R, D`) to canonical lane states.
pub fn port_to_canonical(t: &[u8], polarities: &[Polarity]) -> [u8; 4] {
    let inward: Vec<u8> = t.iter().zip(polarities).map(|(&s, p)| if *p == Polarity::Output { 1 - s } else { s }).collect();
    [inward[0], inward[1], 1 - inward[2], 1 - inward[3]]
}

pub fn canonical_to_port(c: &[u8; 4], polarities: &[Polarity]) -> Vec<u8> {
    let inward = [c[0], c[1], 1 - c[2], 1 - c[3]];
    inward.iter().zip(polarities).map(|(&s, p)| if *p == Polarity::Output { 1 - s } else { s }).collect()
}

/// The shared tile models.
pub fn model(kind: TileKind) -> &'static TileModel {
    static MODELS: OnceLock<BTreeMap<TileKind, TileModel>> = OnceLock::new();
    let models = MODELS.get_or_init(|| {
        let mut kinds = vec![TileKind::Hub(Chirality::Plain), TileKind::Hub(Chirality::Mirrored), TileKind::Crossing];
        kinds.extend(NaeHubVariant::ALL.map(TileKind::NaeHub));
        let built = exec::map(&kinds, |&k| TileModel::build(k));
        kinds.into_iter().zip(built).collect()
    });
    &models[&kind]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_hub_copies_and_mirrored_negates() {
        let p = model(TileKind::Hub(Chirality::Plain));
        assert_eq!(p.canonical, BTreeSet::from([[0, 0, 0, 0], [1, 1, 1, 1]]));
        let m = model(TileKind::Hub(Chirality::Mirrored));
        assert_eq!(m.canonical, BTreeSet::from([[0, 1, 0, 1], [1, 0, 1, 0]]));
        let x = model(TileKind::Crossing);
        assert_eq!(x.canonical.len(), 4);
        assert!(x.canonical.iter().all(|c| c[W] == c[E] && c[N] == c[S]));
        assert!(x.row_jog().is_zero() && x.col_jog().is_zero());
    }

    #[test]
    fn base_nae_hub_relation() {
        let t = model(TileKind::NaeHub(NaeHubVariant::Base));
        for c in &t.canonical {
            assert_eq!(c[S], c[E]);
            assert!(!(c[W] == c[N] && c[N] == 1 - c[E]));
        }
        assert_eq!(t.canonical.len(), 6);
    }

    #[test]
    fn jogs() {
        let h = model(TileKind::Hub(Chirality::Plain));
        assert_eq!(h.row_jog(), ExactScalar::from_parts(0, 1, -1, 2));
        assert_eq!(h.col_jog(), ExactScalar::ratio(3, 2));
        let m = model(TileKind::Hub(Chirality::Mirrored));
        assert_eq!(m.row_jog(), ExactScalar::from_parts(0, 1, 1, 2));
        assert_eq!(m.col_jog(), ExactScalar::ratio(-3, 2));
        let n = model(TileKind::NaeHub(NaeHubVariant::Base));
        assert_eq!(n.row_jog(), ExactScalar::from_parts(0, 1, -5, 4));
        assert_eq!(n.col_jog(), ExactScalar::ratio(3, 4));
    }
}
