//! Individual checks. Each returns [`CheckResult`]s naming the first
//! offending bidegree or value.

use std::collections::BTreeMap;

use super::f2::{apply_mod2, columns_mod2, kernel_mod2, Echelon};
use super::oracle::oracle_jones;
use super::CheckResult;
use crate::complex::{Coefficients, DifferentialKind, Slices, StateCube};
use crate::diagram::LinkDiagram;
use crate::error::{ComplexError, Error, Result};
use crate::homology::{compute_table, lee_dimension, ComputeOptions};
use crate::invariants::{Bidegree, HClass, HomologyTable, TClass};
use crate::linalg::{rank_mod_p, SparseIntMatrix};
use crate::par::Exec;
use crate::poly::LaurentPoly;

/// Homology-level ν̄ checks are skipped above this total mod-2 homology.
pub const NU_BAR_MAX_HOMOLOGY: u64 = 2000;
/// ... and above this chain-group dimension in any slice.
pub const NU_BAR_MAX_SLICE: usize = 2500;

type Build<'a> =
    dyn Fn(DifferentialKind, Coefficients, i32, i32) -> Result<SparseIntMatrix, ComplexError> + 'a;

/// Runs `combo` at every bidegree; it returns a matrix that must vanish
/// (mod `p` when given).
pub fn vanishing_check(
    name: &str,
    subject: &str,
    bidegrees: &[Bidegree],
    p: Option<u64>,
    combo: impl Fn(i32, i32) -> Result<SparseIntMatrix>,
) -> Result<CheckResult> {
    for &(i, j) in bidegrees {
        let m = combo(i, j)?;
        let zero = match p {
            Some(p) => m.is_zero_mod(p),
            None => m.is_zero(),
        };
        if !zero {
            let (r, c, v) = m
                .entries()
                .find(|e| p.is_none_or(|p| e.2.rem_euclid(p as i64) != 0))
                .unwrap();
            return Ok(CheckResult::fail(
                name,
                subject,
                format!("nonzero entry {v} at ({r},{c}) from bidegree ({i},{j})"),
            ));
        }
    }
    Ok(CheckResult::pass(name, subject, ""))
}

/// `d∘d = 0` over Z with a caller-supplied differential, so that corrupted
/// matrices can be fed in.
pub fn check_d_squared_with(
    subject: &str,
    slices: &Slices,
    d: impl Fn(i32, i32) -> Result<SparseIntMatrix>,
) -> Result<CheckResult> {
    vanishing_check("d_squared", subject, &slices.bidegrees(), None, |i, j| {
        Ok(d(i + 1, j)?.mul(&d(i, j)?)?)
    })
}

fn chain_identities(subject: &str, slices: &Slices, m: &Build<'_>) -> Result<Vec<CheckResult>> {
    use Coefficients::{Integers, ModP};
    use DifferentialKind::{KhovanovD as D, LeePhi as Phi, Nu, X};
    let bd = slices.bidegrees();
    let z2 = ModP(2);
    let mut out = vec![check_d_squared_with(subject, slices, |i, j| {
        Ok(m(D, Integers, i, j)?)
    })?];
    out.push(vanishing_check(
        "nu_squared",
        subject,
        &bd,
        Some(2),
        |i, j| Ok(m(Nu, z2, i, j + 2)?.mul(&m(Nu, z2, i, j)?)?),
    )?);
    out.push(vanishing_check("x_squared", subject, &bd, None, |i, j| {
        Ok(m(X, Integers, i, j - 2)?.mul(&m(X, Integers, i, j)?)?)
    })?);
    out.push(vanishing_check(
        "d_nu_commute",
        subject,
        &bd,
        Some(2),
        |i, j| {
            let a = m(D, z2, i, j + 2)?.mul(&m(Nu, z2, i, j)?)?;
            let b = m(Nu, z2, i + 1, j)?.mul(&m(D, z2, i, j)?)?;
            Ok(a.add(&b.scaled(-1))?)
        },
    )?);
    out.push(vanishing_check(
        "d_x_commute",
        subject,
        &bd,
        None,
        |i, j| {
            let a = m(D, Integers, i, j - 2)?.mul(&m(X, Integers, i, j)?)?;
            let b = m(X, Integers, i + 1, j)?.mul(&m(D, Integers, i, j)?)?;
            Ok(a.add(&b.scaled(-1))?)
        },
    )?);
    out.push(vanishing_check(
        "nu_x_homotopy",
        subject,
        &bd,
        Some(2),
        |i, j| {
            let a = m(X, z2, i, j + 2)?.mul(&m(Nu, z2, i, j)?)?;
            let b = m(Nu, z2, i, j - 2)?.mul(&m(X, z2, i, j)?)?;
            Ok(a.add(&b)?
                .add(&SparseIntMatrix::identity(slices.dim(i, j)).scaled(-1))?)
        },
    )?);
    for p in [3, 5] {
        let zp = ModP(p);
        out.push(vanishing_check(
            &format!("phi_squared_mod{p}"),
            subject,
            &bd,
            Some(p),
            |i, j| Ok(m(Phi, zp, i + 1, j + 4)?.mul(&m(Phi, zp, i, j)?)?),
        )?);
        out.push(vanishing_check(
            &format!("phi_d_anticommute_mod{p}"),
            subject,
            &bd,
            Some(p),
            |i, j| {
                let a = m(Phi, zp, i + 1, j)?.mul(&m(D, zp, i, j)?)?;
                let b = m(D, zp, i + 1, j + 4)?.mul(&m(Phi, zp, i, j)?)?;
                Ok(a.add(&b)?)
            },
        )?);
    }
    Ok(out)
}

/// `d² = 0`, `ν² = 0`, `X² = 0`, `dν = νd`, `dX = Xd`, `νX + Xν = id`,
/// `Φ² = 0` and `Φd + dΦ = 0`, each over the ring it is claimed for.
pub fn check_chain_identities(
    d: &LinkDiagram,
    subject: &str,
    cap: u64,
) -> Result<Vec<CheckResult>> {
    let cube = StateCube::new(d, cap)?;
    let slices = cube.slices(false);
    let build = |k, c, i, j| cube.build_matrix(&slices, k, c, i, j);
    chain_identities(subject, &slices, &build)
}

/// `Σ_j (−1)^j h_2^{i, 2j+γ} = 0` in every column.
pub fn check_z2_columns(subject: &str, betti2: &BTreeMap<Bidegree, u64>) -> CheckResult {
    let mut sums: BTreeMap<i32, i64> = BTreeMap::new();
    for (&(i, j), &b) in betti2 {
        let sign = if j.div_euclid(2).rem_euclid(2) == 0 {
            1
        } else {
            -1
        };
        *sums.entry(i).or_default() += sign * b as i64;
    }
    match sums.iter().find(|(_, &s)| s != 0) {
        Some((i, s)) => {
            CheckResult::fail("z2_column_sums", subject, format!("column {i} sums to {s}"))
        }
        None => CheckResult::pass("z2_column_sums", subject, format!("{} columns", sums.len())),
    }
}

/// `h_2^{i,2i+s−1} = h_2^{i,2i+s+1}` with `s = −σ`, for knots with known signature.
pub fn check_z2_pairing(
    subject: &str,
    betti2: &BTreeMap<Bidegree, u64>,
    signature: i32,
) -> CheckResult {
    let s = -signature;
    let h = |i: i32, j: i32| betti2.get(&(i, j)).copied().unwrap_or(0);
    let columns: std::collections::BTreeSet<i32> = betti2.keys().map(|k| k.0).collect();
    for i in columns {
        let (lo, hi) = (h(i, 2 * i + s - 1), h(i, 2 * i + s + 1));
        if lo != hi {
            return CheckResult::fail(
                "z2_pairing",
                subject,
                format!(
                    "h2({i},{}) = {lo} but h2({i},{}) = {hi}",
                    2 * i + s - 1,
                    2 * i + s + 1
                ),
            );
        }
    }
    CheckResult::pass("z2_pairing", subject, format!("s = {s}"))
}

/// Exactness of `H_{Z2} --ν̄--> H_{Z2} --ν̄--> H_{Z2}` in every bidegree,
/// from explicit cycle representatives. `None` when the diagram is too big.
pub fn check_nu_bar_exact(d: &LinkDiagram, subject: &str, cap: u64) -> Result<Option<CheckResult>> {
    let cube = StateCube::new(d, cap)?;
    let slices = cube.slices(false);
    if slices.slices.values().any(|s| s.dim() > NU_BAR_MAX_SLICE) {
        return Ok(None);
    }
    let z2 = Coefficients::ModP(2);
    let m = |k, i, j| cube.build_matrix(&slices, k, z2, i, j);
    let mut cycles: BTreeMap<Bidegree, Vec<super::f2::BitVec>> = BTreeMap::new();
    let mut boundaries: BTreeMap<Bidegree, Echelon> = BTreeMap::new();
    let mut h: BTreeMap<Bidegree, usize> = BTreeMap::new();
    for (i, j) in slices.bidegrees() {
        let z = kernel_mod2(&m(DifferentialKind::KhovanovD, i, j)?);
        let mut b = Echelon::default();
        for c in columns_mod2(&m(DifferentialKind::KhovanovD, i - 1, j)?) {
            b.insert(c);
        }
        h.insert((i, j), z.len() - b.rank());
        cycles.insert((i, j), z);
        boundaries.insert((i, j), b);
    }
    if h.values().sum::<usize>() as u64 > NU_BAR_MAX_HOMOLOGY {
        return Ok(None);
    }
    // rank of ν̄ out of each bidegree
    let mut r: BTreeMap<Bidegree, usize> = BTreeMap::new();
    for (i, j) in slices.bidegrees() {
        let nu = m(DifferentialKind::Nu, i, j)?;
        let cols = columns_mod2(&nu);
        let mut span = boundaries.get(&(i, j + 2)).cloned().unwrap_or_default();
        let base = span.rank();
        for z in &cycles[&(i, j)] {
            span.insert(apply_mod2(&cols, nu.n_rows(), z));
        }
        r.insert((i, j), span.rank() - base);
    }
    for (&(i, j), &hij) in &h {
        let through = r[&(i, j)] + r.get(&(i, j - 2)).copied().unwrap_or(0);
        if through != hij {
            return Ok(Some(CheckResult::fail(
                "nu_bar_exact",
                subject,
                format!("at ({i},{j}): dim H = {hij} but rank in + rank out = {through}"),
            )));
        }
    }
    Ok(Some(CheckResult::pass(
        "nu_bar_exact",
        subject,
        format!("total mod-2 homology {}", h.values().sum::<usize>()),
    )))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

/// The complex of `±` words of length `n` graded by `#plus − #minus`, with
/// the differential summing over the ways of turning one `−` into `+`, has
/// zero homology over Z/2.
pub fn check_gn_acyclic(n: usize) -> Result<CheckResult> {
    let subject = format!("G_{n}");
    if n == 0 || n > 20 {
        return Ok(CheckResult::fail(
            "gn_acyclic",
            &subject,
            "n must lie in 1..=20",
        ));
    }
    let mut by_k: BTreeMap<i32, Vec<u64>> = BTreeMap::new();
    for w in 0..1u64 << n {
        by_k.entry(2 * w.count_ones() as i32 - n as i32)
            .or_default()
            .push(w);
    }
    let mut mu: BTreeMap<i32, SparseIntMatrix> = BTreeMap::new();
    for (&k, words) in &by_k {
        let empty = Vec::new();
        let target = by_k.get(&(k + 2)).unwrap_or(&empty);
        let index = |w: u64| target.binary_search(&w).expect("word of the next degree");
        let trip = words.iter().enumerate().flat_map(|(c, &w)| {
            (0..n)
                .filter(move |b| w >> b & 1 == 0)
                .map(move |b| (index(w | 1 << b), c, 1))
        });
        mu.insert(
            k,
            SparseIntMatrix::from_triplets(target.len(), words.len(), trip)?,
        );
    }
    let mut rank: BTreeMap<i32, usize> = BTreeMap::new();
    for (&k, m) in &mu {
        rank.insert(k, rank_mod_p(m, 2)?);
    }
    for (&k, words) in &by_k {
        let expected = binomial(n as u64, ((n as i32 + k) / 2) as u64);
        if words.len() as u64 != expected {
            return Ok(CheckResult::fail(
                "gn_acyclic",
                &subject,
                format!("dim G^{k} = {} != {expected}", words.len()),
            ));
        }
        if let Some(next) = mu.get(&(k + 2)) {
            if !next.mul(&mu[&k])?.is_zero_mod(2) {
                return Ok(CheckResult::fail(
                    "gn_acyclic",
                    &subject,
                    format!("mu∘mu != 0 at {k}"),
                ));
            }
        }
        let h = words.len() - rank[&k] - rank.get(&(k - 2)).copied().unwrap_or(0);
        if h != 0 {
            return Ok(CheckResult::fail(
                "gn_acyclic",
                &subject,
                format!("homology of dimension {h} at {k}"),
            ));
        }
    }
    let dims: Vec<String> = by_k.values().map(|w| w.len().to_string()).collect();
    Ok(CheckResult::pass(
        "gn_acyclic",
        &subject,
        format!("dims ({})", dims.join(",")),
    ))
}

/// `dim H(C ⊗ Z/p, Φ + d) = 2^m`. Asserted only when `assert` is set (the
/// statement is about H-slim links); otherwise the value is recorded.
pub fn check_lee_dimension(
    d: &LinkDiagram,
    subject: &str,
    p: u64,
    assert: bool,
    cap: u64,
    exec: Exec,
) -> Result<CheckResult> {
    if p == 2 {
        return Err(ComplexError::InvalidRing(
            "Lee's deformation divides by 2; p must be odd".into(),
        )
        .into());
    }
    let cube = StateCube::with_exec(d, cap, exec)?;
    let slices = cube.slices(false);
    let dim = lee_dimension(&cube, &slices, p, exec)?;
    let want = 1u64 << d.n_components();
    let name = format!("lee_dimension_mod{p}");
    Ok(if !assert {
        CheckResult::pass(&name, subject, format!("recorded only: dim = {dim}"))
    } else if dim == want {
        CheckResult::pass(&name, subject, format!("dim = {dim}"))
    } else {
        CheckResult::fail(&name, subject, format!("dim = {dim}, expected {want}"))
    })
}

fn divide_binomial(p: &LaurentPoly, lo: i32, hi: i32) -> Option<LaurentPoly> {
    // exact division by q^lo + q^hi, lowest term first
    let mut rem = p.clone();
    let mut quot = LaurentPoly::zero();
    while let Some(e) = rem.min_degree() {
        if e - lo + hi > rem.max_degree().unwrap() {
            return None;
        }
        let c = rem.coeff(e);
        quot.add_term(e - lo, c);
        rem.add_term(e, -c);
        rem.add_term(e - lo + hi, -c);
    }
    Some(quot)
}

/// Whether `J` factors into unknot-union `(q + 1/q)` and Hopf-link
/// `(q + q^5)`, `(q^{-1} + q^{-5})` factors, i.e. whether the Jones
/// polynomial is that of a connected sum or disjoint union of unknots and
/// Hopf links.
pub fn is_exceptional_jones(j: &LaurentPoly) -> bool {
    if *j == LaurentPoly::one() {
        return true;
    }
    [(-1, 1), (1, 5), (-5, -1)].iter().any(|&(lo, hi)| {
        divide_binomial(j, lo, hi).is_some_and(|q| !q.is_zero() && is_exceptional_jones(&q))
    })
}

/// H-slim tables have 2-power torsion only.
pub fn check_theorem_a(t: &HomologyTable, subject: &str) -> CheckResult {
    if t.h_class() != HClass::HSlim {
        return CheckResult::pass("theorem_a", subject, format!("skipped: {}", t.h_class()));
    }
    match t.groups.iter().find_map(|(k, g)| {
        g.torsion
            .keys()
            .find(|q| !q.is_power_of_two())
            .map(|q| (k, q))
    }) {
        Some(((i, j), q)) => CheckResult::fail(
            "theorem_a",
            subject,
            format!("torsion of order {q} at ({i},{j})"),
        ),
        None => CheckResult::pass("theorem_a", subject, ""),
    }
}

/// For H-slim tables: WT-thin; 2-torsion unless exceptional;
/// `d(L) ≥ 2^{m−1}` with equality only when exceptional; rank above `2^m`
/// unless exceptional.
pub fn check_theorem_b(t: &HomologyTable, subject: &str) -> Vec<CheckResult> {
    let names = [
        "theorem_b",
        "corollary_z2",
        "lemma_determinant",
        "lemma_rank",
    ];
    if t.h_class() != HClass::HSlim {
        return names
            .iter()
            .map(|n| CheckResult::pass(n, subject, format!("skipped: {}", t.h_class())))
            .collect();
    }
    let report = t.thinness_report();
    let mut out = vec![CheckResult::from_outcome(
        names[0],
        subject,
        match report.t_class {
            TClass::TThin | TClass::WtThin => Ok(report.t_class.to_string()),
            c => Err(format!("{c}: {}", report.t_reason)),
        },
    )];
    let jones = match t.jones() {
        Ok(j) => j,
        Err(e) => {
            out.extend(
                names[1..]
                    .iter()
                    .map(|n| CheckResult::fail(n, subject, format!("no Jones polynomial: {e}"))),
            );
            return out;
        }
    };
    let exceptional = is_exceptional_jones(&jones);
    let m = t.components.max(1) as u32;
    out.push(CheckResult::from_outcome(
        names[1],
        subject,
        match (exceptional, t.torsion_orders().contains(&2)) {
            (true, _) => Ok("exempt: unknot/Hopf composite".into()),
            (false, true) => Ok(String::new()),
            (false, false) => Err("no torsion of order 2".into()),
        },
    ));
    let det = jones.abs_at_i().unwrap_or(0);
    let floor = 1u64 << (m - 1);
    out.push(CheckResult::from_outcome(
        names[2],
        subject,
        if det < floor {
            Err(format!("d = {det} < {floor}"))
        } else if det == floor && !exceptional {
            Err(format!("d = {floor} but not an unknot/Hopf composite"))
        } else {
            Ok(format!("d = {det}"))
        },
    ));
    let rank = t.total_rank();
    out.push(CheckResult::from_outcome(
        names[3],
        subject,
        if exceptional || rank > 1 << m {
            Ok(format!("rank {rank}"))
        } else {
            Err(format!("rank {rank} <= {}", 1u64 << m))
        },
    ));
    out
}

/// Sign `c` such that alternating links live on the `cσ ± 1` diagonals
/// `b = 2i − j`, fixed once from the right-handed trefoil with `σ = −2`.
pub fn calibrate_diagonals() -> Result<i32> {
    let d = LinkDiagram::parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]")?;
    let t = compute_table(
        &d,
        &ComputeOptions {
            exec: Exec::Sequential,
            ..Default::default()
        },
    )?;
    let sigma = -2;
    let support = t.diagonal_support();
    [1, -1]
        .into_iter()
        .find(|c| support == [c * sigma - 1, c * sigma + 1].into())
        .ok_or_else(|| Error::Store(format!("trefoil support {support:?} fits neither sign")))
}

pub fn calibration_row(c: i32) -> CheckResult {
    CheckResult::pass(
        "diagonal_calibration",
        "3_1",
        format!("b = 2i - j; trefoil sigma = -2 on diagonals {{-3,-1}}; alternating links expected on b = {}sigma +- 1", if c == 1 { "" } else { "-" }),
    )
}

/// H-slim with support exactly the `cσ ± 1` diagonals.
pub fn check_diagonal_support(t: &HomologyTable, subject: &str, calibration: i32) -> CheckResult {
    let Some(sigma) = t.meta.signature else {
        return CheckResult::pass("diagonal_support", subject, "skipped: no signature");
    };
    let want = [calibration * sigma - 1, calibration * sigma + 1].into();
    let support = t.diagonal_support();
    CheckResult::from_outcome(
        "diagonal_support",
        subject,
        if t.h_class() != HClass::HSlim {
            Err(format!("{} with support {support:?}", t.h_class()))
        } else if support != want {
            Err(format!("support {support:?}, expected {want:?}"))
        } else {
            Ok(format!("{support:?}"))
        },
    )
}

/// Homology-derived `K_L(q)` equals the skein oracle.
pub fn check_euler_oracle(
    d: &LinkDiagram,
    t: &HomologyTable,
    subject: &str,
) -> Result<CheckResult> {
    let oracle = oracle_jones(d)?;
    let k = t.graded_euler();
    Ok(CheckResult::from_outcome(
        "euler_oracle",
        subject,
        if k == oracle {
            Ok(String::new())
        } else {
            Err(format!("homology gives {k}, skein gives {oracle}"))
        },
    ))
}

/// Reduced table: Euler characteristic `J_L` and one diagonal fewer.
pub fn check_reduced(t: &HomologyTable, subject: &str) -> Vec<CheckResult> {
    let (Some(rk), Some(rs)) = (t.reduced_euler(), t.reduced_diagonal_support()) else {
        return Vec::new();
    };
    let j = t.graded_euler().div_unknot();
    let euler = CheckResult::from_outcome(
        "reduced_euler",
        subject,
        match j {
            Ok(j) if j == rk => Ok(String::new()),
            Ok(j) => Err(format!("reduced gives {rk}, J = {j}")),
            Err(e) => Err(e.to_string()),
        },
    );
    let full = t.diagonal_support();
    let span = |s: &std::collections::BTreeSet<i32>| {
        s.iter()
            .next_back()
            .zip(s.iter().next())
            .map_or(0, |(a, b)| (a - b) / 2 + 1)
    };
    let diagonals = CheckResult::from_outcome(
        "reduced_one_diagonal_less",
        subject,
        if span(&rs) + 1 == span(&full) {
            Ok(format!("{} vs {}", span(&rs), span(&full)))
        } else {
            Err(format!(
                "reduced spans {} diagonals, unreduced {}",
                span(&rs),
                span(&full)
            ))
        },
    );
    vec![euler, diagonals]
}

/// H-thin tables have alternating Jones polynomials.
pub fn check_jones_alternating(t: &HomologyTable, subject: &str) -> CheckResult {
    if t.h_class() == HClass::HThick {
        return CheckResult::pass("jones_alternating", subject, "skipped: H-thick");
    }
    CheckResult::from_outcome(
        "jones_alternating",
        subject,
        match t.jones() {
            Ok(j) if j.is_alternating() => Ok(String::new()),
            Ok(j) => Err(format!("J = {j}")),
            Err(e) => Err(e.to_string()),
        },
    )
}

/// Two tables of the same link agree group by group, reduced tables included
/// when both have them.
pub fn check_invariance(a: &HomologyTable, b: &HomologyTable, subject: &str) -> CheckResult {
    let first_diff = |x: &BTreeMap<Bidegree, crate::linalg::AbelianGroup>,
                      y: &BTreeMap<Bidegree, crate::linalg::AbelianGroup>| {
        x.keys()
            .chain(y.keys())
            .find(|k| x.get(k) != y.get(k))
            .copied()
    };
    if let Some((i, j)) = first_diff(&a.groups, &b.groups) {
        return CheckResult::fail(
            "invariance",
            subject,
            format!("({i},{j}): {} vs {}", a.group(i, j), b.group(i, j)),
        );
    }
    if let (Some(x), Some(y)) = (&a.reduced, &b.reduced) {
        if let Some((i, j)) = first_diff(x, y) {
            return CheckResult::fail(
                "invariance",
                subject,
                format!("reduced tables differ at ({i},{j})"),
            );
        }
    }
    CheckResult::pass("invariance", subject, "")
}

/// Reduced homology of a knot is the same for every base point.
pub fn check_base_point_invariance(
    d: &LinkDiagram,
    subject: &str,
    cap: u64,
) -> Result<CheckResult> {
    let opts = ComputeOptions {
        cap,
        reduced: true,
        exec: Exec::Sequential,
        ..Default::default()
    };
    let reference = compute_table(d, &opts)?;
    for &label in d.labels() {
        let moved = d.clone().with_base_point(label)?;
        let t = compute_table(&moved, &opts)?;
        if t.reduced != reference.reduced {
            return Ok(CheckResult::fail(
                "base_point_invariance",
                subject,
                format!("base point {label} differs"),
            ));
        }
    }
    Ok(CheckResult::pass(
        "base_point_invariance",
        subject,
        format!("{} base points", d.labels().len()),
    ))
}
