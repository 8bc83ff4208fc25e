//! Python bindings: a `Session` owns one registry and one exact space, and
//! takes points, balls and opens in the same literal syntax as `ctop`.

use std::sync::Arc;

use computable_topology::cli::literal::{parse_ball, parse_open, parse_point, BallLit, OpenLit};
use computable_topology::kernel::dovetail::enumerate;
use computable_topology::kernel::{pairing, Fuel, Nat, Registry};
use computable_topology::metric::{
    ball, ball_formal_incl, balls_spreen_basis, default_dense, exact_radius, radius_approx, theta, BallName, ExactKind,
    InclusionMode, MetricSpace,
};
use computable_topology::numberings::{Decision, Verdict};
use computable_topology::reals::{format_rational, parse_rational};
use computable_topology::topology::continuity::{map_realizer, modulus_program, ModulusCheck, ModulusConfig};
use computable_topology::topology::{
    basic_as_open, interval_open, metric_to_spreen, spreen_intersect, spreen_member, spreen_to_lacombe,
    spreen_union_of, SpreenBasis, SpreenOpenName,
};
use computable_topology::Error;
use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Invalid(_) | Error::Parse { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

type Res<T> = Result<T, Error>;

/// Cantor pairing `⟨a, b⟩`.
#[pyfunction]
fn pair(a: BigUint, b: BigUint) -> BigUint {
    pairing::pair(&a, &b)
}

/// Inverse of `pair`.
#[pyfunction]
fn unpair(n: BigUint) -> (BigUint, BigUint) {
    pairing::unpair(&n)
}

#[pyclass(frozen)]
struct Session {
    reg: Registry,
    space: Arc<MetricSpace>,
    kind: ExactKind,
    basis: SpreenBasis,
}

impl Session {
    fn point_name(&self, text: &str) -> Res<Nat> {
        let p = parse_point(text, self.kind)?;
        self.space.point_name(&self.reg, &p).ok_or_else(|| Error::Invalid(format!("{p} is not a point of the space")))
    }

    fn ball_name(&self, b: &BallLit) -> Res<BallName> {
        ball(&self.reg, &self.space, &b.center, b.radius.clone())
    }

    fn parse_ball_name(&self, text: &str) -> Res<BallName> {
        self.ball_name(&parse_ball(text, self.kind)?)
    }

    fn open(&self, lit: &OpenLit) -> Res<SpreenOpenName> {
        Ok(match lit {
            OpenLit::Basic(b) => basic_as_open(&self.reg, &self.basis, &self.ball_name(b)?.0),
            OpenLit::Interval(lo, hi) => metric_to_spreen(&self.reg, &interval_open(&self.reg, &self.space, lo, hi)?)?,
            OpenLit::Union(parts) => {
                let parts = parts.iter().map(|p| self.open(p)).collect::<Res<Vec<_>>>()?;
                spreen_union_of(&self.reg, &parts)
            }
            OpenLit::Inter(a, b) => spreen_intersect(&self.reg, &self.basis, &self.open(a)?, &self.open(b)?)?,
        })
    }

    /// `(centre, radius)` as text; approximate radii carry a `~`.
    fn show(&self, name: &Nat) -> Res<(String, String)> {
        let b = BallName(name.clone());
        let center = match self.space.exact_point(&self.reg, &b.center()) {
            Some(p) => p.to_string(),
            None => format!("#{}", b.center()),
        };
        let radius = match exact_radius(&self.reg, b.radius(&self.reg)?) {
            Some(r) => r.to_string(),
            None => format!("~{}", format_rational(&radius_approx(&self.reg, &b, 20)?)),
        };
        Ok((center, radius))
    }
}

#[pymethods]
impl Session {
    /// A fresh registry over `space` (`rationals`, `unit-interval`, `unit-square`, ...).
    #[new]
    #[pyo3(signature = (space = "rationals"))]
    fn new(space: &str) -> PyResult<Self> {
        let reg = Registry::new();
        let space = MetricSpace::by_handle(&reg, space).map_err(py_err)?;
        let kind = space
            .exact_kind()
            .ok_or_else(|| PyValueError::new_err(format!("{} has no literal syntax", space.handle.0)))?;
        let basis = balls_spreen_basis(&reg, &space);
        Ok(Session { reg, space, kind, basis })
    }

    #[getter]
    fn space(&self) -> String {
        self.space.handle.0.clone()
    }

    /// Number of registered programs.
    fn programs(&self) -> usize {
        self.reg.len()
    }

    /// Name of an exact point, e.g. `"1/2"` or `"(1/2,1/3)"`.
    fn point(&self, text: &str) -> PyResult<BigUint> {
        self.point_name(text).map_err(py_err)
    }

    /// Name of a ball literal such as `"(0;1)"`.
    fn ball(&self, text: &str) -> PyResult<BigUint> {
        Ok(self.parse_ball_name(text).map_err(py_err)?.0)
    }

    /// Whether membership of `point` in `open` is confirmed within `fuel`.
    #[pyo3(signature = (open, point, fuel = 100_000))]
    fn member(&self, py: Python<'_>, open: &str, point: &str, fuel: u64) -> PyResult<bool> {
        let o = self.open(&parse_open(open, self.kind).map_err(py_err)?).map_err(py_err)?;
        let p = self.point_name(point).map_err(py_err)?;
        let v = py.detach(|| spreen_member(&self.reg, &o, &p, Fuel(fuel))).map_err(py_err)?;
        Ok(v == Verdict::Yes)
    }

    /// Exact formal inclusion `b1 ⊆̊ b2`: `d(c1, c2) + r1 ≤ r2`.
    fn formal_inclusion(&self, b1: &str, b2: &str) -> PyResult<bool> {
        let (a, b) = (self.parse_ball_name(b1).map_err(py_err)?, self.parse_ball_name(b2).map_err(py_err)?);
        let d = ball_formal_incl(&self.reg, &self.space, &a, &b, InclusionMode::Exact, Fuel(1)).map_err(py_err)?;
        Ok(d == Decision::Yes)
    }

    /// `min(r1 - d(x,c1), r2 - d(x,c2))` as exact text.
    fn theta(&self, x: &str, b1: &str, b2: &str) -> PyResult<String> {
        let x = self.point_name(x).map_err(py_err)?;
        let (a, b) = (self.parse_ball_name(b1).map_err(py_err)?, self.parse_ball_name(b2).map_err(py_err)?);
        let t = theta(&self.reg, &self.space, &x, &a, &b).map_err(py_err)?;
        let exact = exact_radius(&self.reg, t).ok_or_else(|| PyRuntimeError::new_err("theta is not exact here"))?;
        Ok(exact.to_string())
    }

    /// The first `count` balls of the Lacombe cover of `open`, as `(centre, radius)`.
    #[pyo3(signature = (open, count = 10, fuel = 1_000_000))]
    fn spreen_to_lacombe(&self, py: Python<'_>, open: &str, count: usize, fuel: u64) -> PyResult<Vec<(String, String)>> {
        let o = self.open(&parse_open(open, self.kind).map_err(py_err)?).map_err(py_err)?;
        let names: Vec<Nat> = py
            .detach(|| -> Res<Vec<Nat>> {
                let dense = default_dense(&self.reg, &self.space)?;
                let l = spreen_to_lacombe(&self.reg, dense, &o)?;
                let mut d = enumerate(l.0 .0, None);
                Ok(d.run_count(&self.reg, count, Fuel(fuel))?.iter().map(|e| e.value.clone()).collect())
            })
            .map_err(py_err)?;
        names.iter().map(|n| self.show(n).map_err(py_err)).collect()
    }

    /// Samples `(x, y, ε)` and checks `d(x,y) < φ(x,ε) ⟹ d(f x, f y) < ε`.
    #[pyo3(signature = (function, phi, samples = 100, seed = 0, fuel = 100_000, lo = "-10", hi = "10"))]
    #[allow(clippy::too_many_arguments)]
    fn modulus_check<'py>(
        &self,
        py: Python<'py>,
        function: &str,
        phi: &str,
        samples: usize,
        seed: u64,
        fuel: u64,
        lo: &str,
        hi: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let f = function.parse().map_err(py_err)?;
        let phi = phi.parse().map_err(py_err)?;
        let cfg = ModulusConfig {
            samples,
            seed,
            lo: parse_rational(lo).map_err(py_err)?,
            hi: parse_rational(hi).map_err(py_err)?,
            max_den: 64,
        };
        let check = ModulusCheck {
            domain: &self.space,
            codomain: &self.space,
            f: map_realizer(&self.reg, f),
            phi: modulus_program(&self.reg, phi),
            fuel: Fuel(fuel),
        };
        let report = py.detach(|| check.run(&self.reg, &cfg)).map_err(py_err)?;
        let out = PyDict::new(py);
        out.set_item("ok", report.ok)?;
        out.set_item("inconclusive", report.inconclusive)?;
        let witnesses: Vec<(String, String, String)> = report
            .violations
            .iter()
            .map(|w| (w.x.to_string(), w.y.to_string(), format_rational(&w.eps)))
            .collect();
        out.set_item("violations", witnesses)?;
        Ok(out)
    }
}

#[pymodule]
fn ctop(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(pair, m)?)?;
    m.add_function(wrap_pyfunction!(unpair, m)?)?;
    m.add_class::<Session>()?;
    Ok(())
}
