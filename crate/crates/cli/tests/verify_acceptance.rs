//! Acceptance run. Prints one PASS/FAIL line per criterion and exits nonzero
//! when any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use charcomplex::complex::verify_exactness;
use charcomplex::derivations::{
    apply, resolve_inner_sign, CharacterOnGamma, DerivationContext, DerivationMatrix,
    GroupAlgebraElement,
};
use charcomplex::linalg::{ratio, solve};
use charcomplex::presented::{parallel_pair, rose};
use charcomplex::{
    ActionGroupoid, CharacterSource, GroupElement, GroupTable, Limits, Morphism, PresentedGroupoid,
    Rational,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GROUPS: [&str; 7] = ["C2", "C4", "S3", "D4", "Q8", "A4", "S4"];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

struct Suite {
    contexts: Vec<(&'static str, DerivationContext)>,
}

impl Suite {
    fn build() -> Self {
        let contexts = GROUPS
            .iter()
            .map(|&name| {
                let ctx = DerivationContext::new(group(name), &Limits::default())
                    .unwrap_or_else(|e| panic!("{name}: {e}"));
                (name, ctx)
            })
            .collect();
        Self { contexts }
    }

    fn ctx(&self, name: &str) -> &DerivationContext {
        &self
            .contexts
            .iter()
            .find(|(n, _)| *n == name)
            .expect("test group")
            .1
    }
}

fn group(name: &str) -> GroupTable {
    GroupTable::named(name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

// 1

fn exactness(_: &Suite) -> Verdict {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for name in GROUPS {
        let gamma = ActionGroupoid::new(group(name));
        let report = verify_exactness(&gamma, &Limits::default()).expect("exactness report");
        let good = report
            .components
            .iter()
            .filter(|c| {
                c.exact
                    && c.maps_characters
                    && c.positions.len() == 4
                    && c.positions.iter().all(|p| p.equal)
            })
            .count();
        ok &= good == report.components.len() && report.components.len() == gamma.classes().len();
        notes.push(format!("{name} {good}/{}", report.components.len()));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(60);
    verdict(
        ok,
        format!(
            "exact components {}; {} (limit 60s)",
            notes.join(", "),
            secs(elapsed)
        ),
    )
}

// 2

/// Forward elimination over dense `i128` rows, dividing out the row content
/// after each step.
struct DenseEchelon {
    cols: usize,
    pivots: Vec<Option<Vec<i128>>>,
    rank: usize,
}

impl DenseEchelon {
    fn new(cols: usize) -> Self {
        Self {
            cols,
            pivots: vec![None; cols],
            rank: 0,
        }
    }

    fn insert(&mut self, mut row: Vec<i128>) {
        for c in 0..self.cols {
            if row[c] == 0 {
                continue;
            }
            match &self.pivots[c] {
                Some(p) => {
                    let (a, b) = (p[c], row[c]);
                    for j in c..self.cols {
                        row[j] = row[j]
                            .checked_mul(a)
                            .and_then(|x| x.checked_sub(p[j].checked_mul(b)?))
                            .expect("oracle overflow");
                    }
                    remove_content(&mut row);
                }
                None => {
                    remove_content(&mut row);
                    self.pivots[c] = Some(row);
                    self.rank += 1;
                    return;
                }
            }
        }
    }
}

fn remove_content(row: &mut [i128]) {
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let g = row.iter().fold(0, |g, &x| gcd(g, x.abs()));
    if g > 1 {
        row.iter_mut().for_each(|x| *x /= g);
    }
}

/// `(dim X₁, dim X₁ − dim{trivial on loops})` straight from the Cayley table,
/// one conjugacy class at a time.
fn brute_force_dims(table: &[Vec<usize>]) -> (usize, usize, usize) {
    let n = table.len();
    let e = (0..n)
        .find(|&x| (0..n).all(|y| table[x][y] == y))
        .expect("identity");
    let inv: Vec<usize> = (0..n)
        .map(|x| (0..n).find(|&y| table[x][y] == e).expect("inverse"))
        .collect();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for a in 0..n {
        if seen[a] {
            continue;
        }
        let mut class: Vec<usize> = (0..n).map(|x| table[table[x][a]][inv[x]]).collect();
        class.sort_unstable();
        class.dedup();
        class.iter().for_each(|&c| seen[c] = true);
        classes.push(class);
    }

    let (mut x1, mut x2) = (0, 0);
    for class in &classes {
        let local = |x: usize| class.iter().position(|&c| c == x).expect("same class");
        // the morphism (u, v) has source v⁻¹u and target uv⁻¹
        let source = |u: usize, v: usize| table[inv[v]][u];
        let target = |u: usize, v: usize| table[u][inv[v]];
        let col = |u: usize, v: usize| local(source(u, v)) * n + v;
        let cols = class.len() * n;

        let mut additive = DenseEchelon::new(cols);
        let mut rows = Vec::new();
        for &s in class {
            for v1 in 0..n {
                let u1 = table[v1][s];
                let t = target(u1, v1);
                for v2 in 0..n {
                    let u2 = table[v2][t];
                    let (u, v) = (table[u2][v1], table[v2][v1]);
                    let mut row = vec![0i128; cols];
                    row[col(u, v)] += 1;
                    row[col(u1, v1)] -= 1;
                    row[col(u2, v2)] -= 1;
                    rows.push(row);
                }
            }
        }
        let mut with_loops = DenseEchelon::new(cols);
        for row in rows {
            additive.insert(row.clone());
            with_loops.insert(row);
        }
        for &s in class {
            for v in 0..n {
                let u = table[v][s];
                if target(u, v) == s {
                    let mut row = vec![0i128; cols];
                    row[col(u, v)] = 1;
                    with_loops.insert(row);
                }
            }
        }
        x1 += cols - additive.rank;
        x2 += with_loops.rank - additive.rank;
    }
    (classes.len(), x1, x2)
}

fn dimension_law(suite: &Suite) -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, ctx) in &suite.contexts {
        let g = ctx.group();
        let dims = ctx.complex().dims();
        let (classes, oracle_x1, oracle_x2) = brute_force_dims(&g.cayley_table());
        let expected = g.order() - classes;
        let good = dims.x1 == expected
            && oracle_x1 == expected
            && dims.x2 == 0
            && oracle_x2 == 0
            && classes == g.conjugacy_classes().len();
        ok &= good;
        notes.push(format!(
            "{name} X1={}/{oracle_x1} X2={}/{oracle_x2}",
            dims.x1, dims.x2
        ));
    }
    verdict(ok, format!("library/oracle: {}", notes.join(", ")))
}

// 3

fn dictionary(suite: &Suite) -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, ctx) in &suite.contexts {
        let der = ctx.der_space();
        let x1 = ctx.x1_space();
        let mut good = der.dim() == x1.dim();
        for v in der.basis() {
            let d = ctx.derivation(v.clone()).expect("basis derivation");
            let back = ctx
                .derivation_from_char(&ctx.char_from_derivation(&d))
                .expect("character");
            good &= back == d;
        }
        for v in x1.basis() {
            let c = ctx.character(v.clone()).expect("basis character");
            let back = ctx.char_from_derivation(&ctx.derivation_from_char(&c).expect("derivation"));
            good &= back == c;
        }
        ok &= good;
        notes.push(format!("{name} {}={}", der.dim(), x1.dim()));
    }
    verdict(
        ok,
        format!("dim Der = dim X1 with round trips: {}", notes.join(", ")),
    )
}

// 4

/// `M[x][y]` is the coefficient of `x` in `d(y)`.
fn operator_matrix(g: &GroupTable, d: &DerivationMatrix) -> Vec<Vec<Rational>> {
    let images: Vec<GroupAlgebraElement> = g
        .elements()
        .map(|y| apply(d, &GroupAlgebraElement::basis(y)))
        .collect();
    g.elements()
        .map(|x| images.iter().map(|img| img.coeff(x)).collect())
        .collect()
}

fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn matrix_commutator(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let (ab, ba) = (matmul(a, b), matmul(b, a));
    ab.iter()
        .zip(&ba)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

fn random_derivation(ctx: &DerivationContext, rng: &mut ChaCha8Rng) -> DerivationMatrix {
    let n = ctx.group().order();
    let mut flat = vec![Rational::zero(); n * n];
    for v in ctx.der_space().basis() {
        let s = ratio(rng.gen_range(-7..=7), rng.gen_range(1..=6));
        for (f, x) in flat.iter_mut().zip(v) {
            *f += &s * x;
        }
    }
    ctx.derivation(flat)
        .expect("combination of basis derivations")
}

fn bracket(suite: &Suite) -> Verdict {
    let ctx = suite.ctx("S3");
    let g = ctx.group();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut agree = 0;
    let mut nonzero = 0;
    for _ in 0..100 {
        let (d1, d2) = (
            random_derivation(ctx, &mut rng),
            random_derivation(ctx, &mut rng),
        );
        let m = matrix_commutator(&operator_matrix(g, &d1), &operator_matrix(g, &d2));
        // coeff[h][g] is the coefficient of g in d(h)
        let coeff: Vec<Vec<Rational>> = (0..m.len())
            .map(|h| (0..m.len()).map(|x| m[x][h].clone()).collect())
            .collect();
        let expected = ctx.char_from_derivation(
            &DerivationMatrix::from_coefficients(g, &coeff).expect("commutator is a derivation"),
        );
        let got = ctx
            .bracket_characters(
                &ctx.char_from_derivation(&d1),
                &ctx.char_from_derivation(&d2),
            )
            .expect("bracket");
        nonzero += usize::from(expected.values.iter().any(|x| !x.is_zero()));
        agree += usize::from(got == expected);
    }
    verdict(
        agree == 100,
        format!("S3: {agree}/100 pairs agree with the operator commutator ({nonzero} nonzero)"),
    )
}

// 5

fn inner_characters(suite: &Suite) -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for name in ["S3", "D4"] {
        let ctx = suite.ctx(name);
        let g = ctx.group();
        let points: Vec<CharacterOnGamma> = g.elements().map(|a| ctx.chi_point(a)).collect();
        let inner_match = g
            .elements()
            .filter(|&a| {
                let d_a = ctx.inner_derivation(&GroupAlgebraElement::basis(a));
                ctx.char_from_derivation(&d_a) == points[a.0]
                    && resolve_inner_sign(ctx, a).right_matches
            })
            .count();
        let (mut stated, mut reversed, mut pairs) = (0, 0, 0);
        for a in g.elements() {
            for b in g.elements() {
                pairs += 1;
                let got = ctx
                    .bracket_characters(&points[a.0], &points[b.0])
                    .expect("bracket");
                let (ab, ba) = (&points[g.mul(a, b).0], &points[g.mul(b, a).0]);
                stated += usize::from(got == ab.sub(ba));
                reversed += usize::from(got == ba.sub(ab));
            }
        }
        ok &= inner_match == g.order() && stated == pairs;
        notes.push(format!(
            "{name}: chi^a = chi_(d_a) on {inner_match}/{}, {{chi^a,chi^b}} = chi^ab - chi^ba on {stated}/{pairs} (chi^ba - chi^ab on {reversed}/{pairs})",
            g.order()
        ));
    }
    verdict(ok, notes.join("; "))
}

// 6

fn ideal(suite: &Suite) -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for name in ["S3", "D4"] {
        let ctx = suite.ctx(name);
        let g = ctx.group();
        let report = ctx.verify_ideal().expect("ideal report");

        // independent pass: [d, d_a] with d_a(x) = xa − ax read off the table,
        // evaluated at the loop (bz, z), and the composition identity
        let n = g.order();
        let inner_matrix = |a: GroupElement| -> Vec<Vec<Rational>> {
            let mut m = vec![vec![Rational::zero(); n]; n];
            for x in g.elements() {
                m[g.mul(x, a).0][x.0] += Rational::from_integer(1.into());
                m[g.mul(a, x).0][x.0] -= Rational::from_integer(1.into());
            }
            m
        };
        let der: Vec<Vec<Vec<Rational>>> = ctx
            .der_space()
            .basis()
            .iter()
            .map(|v| operator_matrix(g, &ctx.derivation(v.clone()).expect("basis derivation")))
            .collect();
        let gamma = ctx.gamma();
        let (mut triples, mut loops_vanish, mut compositions) = (0, true, true);
        for a in g.elements() {
            let brackets: Vec<_> = der
                .iter()
                .map(|m| matrix_commutator(m, &inner_matrix(a)))
                .collect();
            for b in g.elements() {
                for z in g.elements().filter(|&z| g.mul(b, z) == g.mul(z, b)) {
                    triples += 1;
                    let bz = g.mul(b, z);
                    // χ(u, v) is the coefficient of u in d(v)
                    loops_vanish &= brackets.iter().all(|p| p[bz.0][z.0].is_zero());
                    let a_inv = g.inv(a);
                    let lhs = gamma.compose(
                        Morphism::new(g.mul(a_inv, bz), z),
                        Morphism::new(bz, g.mul(z, a)),
                    );
                    let rhs = gamma.compose(
                        Morphism::new(bz, g.mul(a, z)),
                        Morphism::new(g.mul(bz, a_inv), z),
                    );
                    compositions &= matches!((lhs, rhs), (Ok(l), Ok(r)) if l == r);
                }
            }
        }
        let good = report.passed
            && report.loop_identity
            && report.composition_identity
            && report.brackets_in_weak_inner
            && report.loop_triples == triples
            && loops_vanish
            && compositions;
        ok &= good;
        notes.push(format!(
            "{name}: report {} ({} triples), independent loop {} composition {}",
            pass_word(report.passed),
            report.loop_triples,
            pass_word(loops_vanish),
            pass_word(compositions)
        ));
    }
    verdict(ok, notes.join("; "))
}

fn pass_word(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

// 7

fn quotient(suite: &Suite) -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, ctx) in &suite.contexts {
        let r = ctx
            .verify_quotient_isomorphism()
            .expect("isomorphism report");
        ok &= r.passed
            && r.derivation_quotient_dim == 0
            && r.character_quotient_dim == 0
            && r.maps_weak_inner_onto_trivial
            && r.injective_on_representatives
            && r.bracket_preserved;
        notes.push(format!(
            "{name} {} ({}/{})",
            pass_word(r.passed),
            r.derivation_quotient_dim,
            r.character_quotient_dim
        ));
    }
    verdict(ok, notes.join(", "))
}

// 8

fn check_lift(p: &PresentedGroupoid) -> (bool, (usize, usize, usize)) {
    let data = p.complex(&Limits::default()).expect("complex");
    let dims = data.dims();
    let tree: Vec<usize> = p.spanning_forest().concat();
    let mut ok = (0..data.num_level1()).all(|e| data.spanning[e] == tree.contains(&e));
    let phi1 = data.boundary1();
    for c in data.x1_space().space.basis() {
        let lift = data.lift_two_character(c).expect("lift");
        ok &= data.boundary2.mul_vec(&lift).unwrap() == data.boundary2.mul_vec(c).unwrap();
        ok &= tree.iter().all(|&e| lift[e].is_zero());
        ok &= data.is_character(&lift).unwrap();
        let diff: Vec<Rational> = c.iter().zip(&lift).map(|(a, b)| a - b).collect();
        ok &= solve(&phi1, &diff).unwrap().is_some();
        ok &= data.is_trivial_on_loops(&diff).unwrap();
    }
    (ok, (dims.x0, dims.x1, dims.x2))
}

fn lift(_: &Suite) -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut cases: Vec<(String, PresentedGroupoid, (usize, usize, usize))> = (1..=3)
        .map(|r| (format!("rose{r}"), rose(r), (1, r, r)))
        .collect();
    cases.push(("parallel pair".into(), parallel_pair(), (2, 2, 1)));
    for (label, p, expected) in &cases {
        let (lift_ok, dims) = check_lift(p);
        ok &= lift_ok && dims == *expected;
        notes.push(format!("{label} dims {dims:?} lift {}", pass_word(lift_ok)));
    }
    verdict(ok, notes.join(", "))
}

// 9

fn two_category(_: &Suite) -> Verdict {
    let gamma = ActionGroupoid::new(group("S3"));
    let g = gamma.group();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let pick = |rng: &mut ChaCha8Rng, v: &[Morphism]| v[rng.gen_range(0..v.len())];
    let conjugate_of = |rng: &mut ChaCha8Rng, a: GroupElement| {
        g.conjugate(a, GroupElement(rng.gen_range(0..g.order())))
    };
    let (mut interchange, mut vertical, mut horizontal) = (0, 0, 0);
    for _ in 0..500 {
        let a = GroupElement(rng.gen_range(0..g.order()));
        let b = conjugate_of(&mut rng, a);
        let c = conjugate_of(&mut rng, b);
        let (ab, bc) = (gamma.hom_set(a, b), gamma.hom_set(b, c));
        let (phi, psi, xi) = (
            pick(&mut rng, &ab),
            pick(&mut rng, &ab),
            pick(&mut rng, &ab),
        );
        let (phi2, psi2, xi2) = (
            pick(&mut rng, &bc),
            pick(&mut rng, &bc),
            pick(&mut rng, &bc),
        );
        let cell = |s, t| gamma.two_cell(s, t).expect("parallel");
        let (alpha, beta) = (cell(phi, psi), cell(psi, xi));
        let (alpha2, beta2) = (cell(phi2, psi2), cell(psi2, xi2));

        let lhs = gamma
            .hcompose(
                gamma.vcompose(alpha, beta).unwrap(),
                gamma.vcompose(alpha2, beta2).unwrap(),
            )
            .unwrap();
        let rhs = gamma
            .vcompose(
                gamma.hcompose(alpha, alpha2).unwrap(),
                gamma.hcompose(beta, beta2).unwrap(),
            )
            .unwrap();
        interchange += usize::from(lhs == rhs);

        let v_left = gamma.vcompose(gamma.identity_two_cell(phi), alpha).unwrap();
        let v_right = gamma.vcompose(alpha, gamma.identity_two_cell(psi)).unwrap();
        vertical += usize::from(v_left == alpha && v_right == alpha);

        let id_a = gamma.identity_two_cell(gamma.identity_at(a));
        let id_b = gamma.identity_two_cell(gamma.identity_at(b));
        let h_left = gamma.hcompose(id_a, alpha).unwrap();
        let h_right = gamma.hcompose(alpha, id_b).unwrap();
        horizontal += usize::from(h_left == alpha && h_right == alpha);
    }
    verdict(
        interchange == 500 && vertical == 500 && horizontal == 500,
        format!("S3, 500 quadruples: interchange {interchange}, vertical identity {vertical}, horizontal identity {horizontal}"),
    )
}

// 10

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn cli_suite() -> Vec<Vec<String>> {
    let all = "complex,exactness,derivations,bracket-table,ideal,iso,lift";
    let mut runs: Vec<Vec<String>> = GROUPS
        .iter()
        .map(|g| {
            vec![
                "--group".into(),
                g.to_string(),
                "--analyses".into(),
                all.into(),
            ]
        })
        .collect();
    runs.push(vec![
        "--group".into(),
        "S3".into(),
        "--analyses".into(),
        "complex,derivations,lift".into(),
        "--emit-bases".into(),
    ]);
    for p in [
        "rose1.json",
        "rose2.json",
        "rose3.json",
        "parallel_pair.json",
    ] {
        runs.push(vec![
            "--presentation".into(),
            fixture(p).display().to_string(),
            "--analyses".into(),
            "complex,exactness,lift".into(),
            "--emit-bases".into(),
        ]);
    }
    runs.push(vec![
        "--group".into(),
        "D4".into(),
        "--analyses".into(),
        all.into(),
        "--format".into(),
        "csv".into(),
    ]);
    runs
}

fn without_timing(out: &str) -> &str {
    out.find(",\n  \"timing\":").map_or(out, |i| &out[..i])
}

fn run_suite() -> Vec<String> {
    cli_suite()
        .iter()
        .map(|args| {
            let out = Command::new(env!("CARGO_BIN_EXE_charcomplex"))
                .args(args)
                .output()
                .expect("spawn charcomplex");
            assert!(out.status.success(), "{args:?} exited with {}", out.status);
            without_timing(&String::from_utf8(out.stdout).expect("utf-8")).to_string()
        })
        .collect()
}

fn determinism(_: &Suite) -> Verdict {
    let (first, second) = (run_suite(), run_suite());
    let same = first.iter().zip(&second).filter(|(a, b)| a == b).count();
    let bytes: usize = first.iter().map(String::len).sum();
    verdict(
        same == first.len() && first.len() == second.len(),
        format!(
            "{same}/{} reports byte-identical without timing ({bytes} bytes)",
            first.len()
        ),
    )
}

type Criterion = fn(&Suite) -> Verdict;

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("exactness", exactness),
        ("dimension law", dimension_law),
        ("derivation dictionary", dictionary),
        ("bracket", bracket),
        ("inner characters", inner_characters),
        ("weak-inner ideal", ideal),
        ("quotient isomorphism", quotient),
        ("nontrivial X2 and lift", lift),
        ("2-category axioms", two_category),
        ("determinism", determinism),
    ];
    let start = Instant::now();
    let suite = Suite::build();
    println!(
        "contexts for {} groups built in {}",
        GROUPS.len(),
        secs(start.elapsed())
    );

    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = panic::catch_unwind(AssertUnwindSafe(|| check(&suite))).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        failed += usize::from(!v.pass);
        println!(
            "{} {:>2} {name}: {} [{}]",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail,
            secs(t.elapsed())
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
