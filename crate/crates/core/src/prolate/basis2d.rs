use super::basis1d::{ProlateBasis1D, EIGEN_FLOOR};
use crate::error::{Error, Result};
use crate::grid::{GridAxis, QSignal};
use crate::quat::Quaternion;
use std::collections::BTreeMap;

/// 1D factor samples keyed by `(k, flipped)`.
pub(crate) type FactorTable = BTreeMap<(usize, bool), Vec<f64>>;

/// Tensor-product eigenfunction `coeff · φ_m(x) φ_n(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Qpswf2D {
    pub m: usize,
    pub n: usize,
    /// `λ_m λ_n`.
    pub lambda2d: f64,
    pub coeff: Quaternion,
    pub values: QSignal,
}

/// 2D basis sorted by eigenvalue, descending, ties broken by `(m, n)`.
#[derive(Debug, Clone)]
pub struct BasisSet2D {
    pub items: Vec<Qpswf2D>,
    pub basis1d: ProlateBasis1D,
    pub t: f64,
    pub w: f64,
    pub ax_x: GridAxis,
    pub ax_y: GridAxis,
}

/// The `count` largest products `λ_m λ_n` over 1D eigenvalues above the floor.
pub fn tensor_order(eigvals: &[f64], count: usize) -> Vec<(usize, usize, f64)> {
    let k = eigvals.iter().take_while(|&&l| l >= EIGEN_FLOOR).count();
    let mut pairs: Vec<(usize, usize, f64)> = (0..k)
        .flat_map(|m| (0..k).map(move |n| (m, n, eigvals[m] * eigvals[n])))
        .collect();
    pairs.sort_by(|a, b| b.2.total_cmp(&a.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    pairs.truncate(count);
    pairs
}

fn check_unit(coeff: Quaternion) -> Result<()> {
    let m = coeff.modulus();
    if (m - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitCoefficient(m));
    }
    Ok(())
}

/// Build the leading `count` tensor-product eigenfunctions sampled on `ax_x × ax_y`.
/// Elements whose 1D factors fall below the eigenvalue floor are omitted, so the
/// result may hold fewer than `count` items.
pub fn build_qpswf_basis(
    basis1d: &ProlateBasis1D,
    count: usize,
    coeff: Quaternion,
    ax_x: GridAxis,
    ax_y: GridAxis,
) -> Result<BasisSet2D> {
    check_unit(coeff)?;
    let order = tensor_order(&basis1d.eigvals, count);
    let needed: Vec<usize> = {
        let mut v: Vec<usize> = order.iter().flat_map(|&(m, n, _)| [m, n]).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let tab_x = tabulate_factors(basis1d, &needed, &ax_x.coords())?;
    let tab_y = if ax_y == ax_x {
        tab_x.clone()
    } else {
        tabulate_factors(basis1d, &needed, &ax_y.coords())?
    };
    let items = order
        .into_iter()
        .map(|(m, n, lambda2d)| {
            let (fx, fy) = (&tab_x[&m], &tab_y[&n]);
            let mut values = Vec::with_capacity(ax_x.count * ax_y.count);
            for &a in fx {
                values.extend(fy.iter().map(|&b| coeff * (a * b)));
            }
            Qpswf2D {
                m,
                n,
                lambda2d,
                coeff,
                values: QSignal::from_values(ax_x, ax_y, values).expect("sizes agree"),
            }
        })
        .collect();
    Ok(BasisSet2D {
        items,
        basis1d: basis1d.clone(),
        t: basis1d.t,
        w: basis1d.w,
        ax_x,
        ax_y,
    })
}

fn tabulate_factors(basis: &ProlateBasis1D, ks: &[usize], xs: &[f64]) -> Result<BTreeMap<usize, Vec<f64>>> {
    ks.iter().map(|&k| Ok((k, basis.extend_many(k, xs)?))).collect()
}

impl BasisSet2D {
    pub fn lambdas(&self) -> Vec<f64> {
        self.items.iter().map(|p| p.lambda2d).collect()
    }

    /// Position of the element `(m, n)`, if present.
    pub fn position(&self, m: usize, n: usize) -> Option<usize> {
        self.items.iter().position(|p| p.m == m && p.n == n)
    }
}

/// One separable term `coeff · φ_m(±x) φ_n(±y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SepTerm {
    pub m: usize,
    pub n: usize,
    pub coeff: Quaternion,
    pub flip_x: bool,
    pub flip_y: bool,
}

/// Finite sum of separable terms built from one 1D basis; evaluated anywhere
/// through the extension formula.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Expansion {
    pub terms: Vec<SepTerm>,
}

impl Expansion {
    pub fn single(m: usize, n: usize, coeff: Quaternion) -> Self {
        Self {
            terms: vec![SepTerm {
                m,
                n,
                coeff,
                flip_x: false,
                flip_y: false,
            }],
        }
    }

    pub fn of(item: &Qpswf2D) -> Self {
        Self::single(item.m, item.n, item.coeff)
    }

    /// `ψ(±x, ±y)`.
    pub fn reflected(&self, flip_x: bool, flip_y: bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| SepTerm {
                    flip_x: t.flip_x ^ flip_x,
                    flip_y: t.flip_y ^ flip_y,
                    ..*t
                })
                .collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| SepTerm {
                    coeff: t.coeff * s,
                    ..*t
                })
                .collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self {
            terms: self.terms.iter().chain(&other.terms).copied().collect(),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(-1.0))
    }

    /// The six reflection combinations `ψ ± ψ(−x,−y)`, `ψ ± ψ(−x,y)`, `ψ ± ψ(x,−y)`
    /// in the order ee, e¹, e², o¹, o², oo.
    pub fn symmetry_combinations(&self) -> [Self; 6] {
        [
            self.plus(&self.reflected(true, true)),
            self.plus(&self.reflected(true, false)),
            self.plus(&self.reflected(false, true)),
            self.minus(&self.reflected(true, false)),
            self.minus(&self.reflected(false, true)),
            self.minus(&self.reflected(true, true)),
        ]
    }

    /// 1D factor values `φ_k(σ x)` keyed by `(k, flipped)`.
    pub(crate) fn factor_tables(
        &self,
        basis: &ProlateBasis1D,
        xs: &[f64],
        ys: &[f64],
    ) -> Result<(FactorTable, FactorTable)> {
        let mut tx = BTreeMap::new();
        let mut ty = BTreeMap::new();
        for t in &self.terms {
            if let std::collections::btree_map::Entry::Vacant(e) = tx.entry((t.m, t.flip_x)) {
                e.insert(eval_factor(basis, t.m, t.flip_x, xs)?);
            }
            if let std::collections::btree_map::Entry::Vacant(e) = ty.entry((t.n, t.flip_y)) {
                e.insert(eval_factor(basis, t.n, t.flip_y, ys)?);
            }
        }
        Ok((tx, ty))
    }

    /// Values on the tensor grid `xs × ys`, x-major.
    pub fn tabulate(&self, basis: &ProlateBasis1D, xs: &[f64], ys: &[f64]) -> Result<Vec<Quaternion>> {
        let (tx, ty) = self.factor_tables(basis, xs, ys)?;
        Ok(combine(&self.terms, &tx, &ty, xs.len(), ys.len()))
    }

    pub fn sample(&self, basis: &ProlateBasis1D, ax_x: GridAxis, ax_y: GridAxis) -> Result<QSignal> {
        let v = self.tabulate(basis, &ax_x.coords(), &ax_y.coords())?;
        QSignal::from_values(ax_x, ax_y, v)
    }
}

pub(crate) fn eval_factor(basis: &ProlateBasis1D, k: usize, flip: bool, xs: &[f64]) -> Result<Vec<f64>> {
    if flip {
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        basis.extend_many(k, &neg)
    } else {
        basis.extend_many(k, xs)
    }
}

/// `Σ coeff · fx[(m,σ)](x) fy[(n,σ)](y)` on the tensor grid.
pub(crate) fn combine(
    terms: &[SepTerm],
    tx: &BTreeMap<(usize, bool), Vec<f64>>,
    ty: &BTreeMap<(usize, bool), Vec<f64>>,
    nx: usize,
    ny: usize,
) -> Vec<Quaternion> {
    let mut out = vec![Quaternion::ZERO; nx * ny];
    for t in terms {
        let (fx, fy) = (&tx[&(t.m, t.flip_x)], &ty[&(t.n, t.flip_y)]);
        for (ix, &a) in fx.iter().enumerate() {
            let row = &mut out[ix * ny..(ix + 1) * ny];
            for (o, &b) in row.iter_mut().zip(fy) {
                *o += t.coeff * (a * b);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_ties() {
        let order = tensor_order(&[0.9, 0.5, 0.1, 1e-13], 6);
        let idx: Vec<(usize, usize)> = order.iter().map(|&(m, n, _)| (m, n)).collect();
        assert_eq!(idx, vec![(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (2, 0)]);
        assert_eq!(order[1].2, order[2].2);
        assert_eq!(tensor_order(&[0.9, 1e-13], 10).len(), 1);
    }
}
