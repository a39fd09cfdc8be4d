use super::{CoxeterSpec, Datum, DatumFile, LvError, Param, RootCase, TableEntry, ValidatedDatum};
use crate::coxeter::{word_name, CoxeterSystem};

pub const BUILTIN_NAMES: [&str; 3] = ["sl2r", "psl2r", "sl2c"];

const SL2R: &str = include_str!("../../data/sl2r.json");
const PSL2R: &str = include_str!("../../data/psl2r.json");

/// Packaged example data, returned already validated.
///
/// * `sl2r`: two closed orbits and the open orbit carrying both its trivial
///   and its Moebius local system.
/// * `psl2r`: one closed orbit under a type II noncompact root.
/// * `sl2c`: the complex datum of type `A1`.
pub fn builtin(name: &str) -> Result<ValidatedDatum, LvError> {
    match name {
        "sl2r" => Datum::from_json(SL2R)?.into_validated(),
        "psl2r" => Datum::from_json(PSL2R)?.into_validated(),
        "sl2c" => gen_complex("A1"),
        other => Err(LvError::UnknownBuiltin(other.to_string())),
    }
}

/// The datum of a complex group: one parameter per Weyl group element `w`,
/// of dimension `l(w)`, and every simple root complex.
pub fn gen_complex(cartan: &str) -> Result<ValidatedDatum, LvError> {
    Datum::from_file(complex_file(cartan)?)?.into_validated()
}

pub(crate) fn complex_file(cartan: &str) -> Result<DatumFile, LvError> {
    let sys = CoxeterSystem::from_cartan(cartan)?;
    let elements = sys.enumerate()?;
    let name = |w: &crate::coxeter::GroupElt| word_name(w.word());
    let params = elements
        .iter()
        .map(|w| Param {
            id: name(w),
            orbit: name(w),
            dim: w.length() as u32,
            local_system: "triv".into(),
            trivial: true,
            closed: w.is_identity(),
            clean: false,
        })
        .collect();
    let mut table = Vec::new();
    for w in elements {
        for s in 0..sys.rank() {
            let ws = sys.mul_gen(w, s);
            let case = if ws.length() > w.length() {
                RootCase::B1
            } else {
                RootCase::B2
            };
            table.push(TableEntry {
                param: name(w),
                s,
                case,
                targets: vec![name(&ws)],
            });
        }
    }
    let mut closure = Vec::new();
    for x in elements {
        for y in elements.iter().filter(|y| y.length() + 1 == x.length()) {
            if sys.bruhat_leq(y, x)? {
                closure.push((name(y), name(x)));
            }
        }
    }
    closure.sort();
    closure.dedup();
    Ok(DatumFile {
        coxeter: CoxeterSpec {
            cartan: Some(cartan.to_string()),
            matrix: None,
        },
        theta: Some((0..sys.rank()).collect()),
        wk: None,
        params,
        table,
        closure: Some(closure),
    })
}
