use massey_core::algebra::LieAlgebra;
use massey_core::ce::{CeComplex, Cochain};
use massey_core::exact::{int, rat, sign, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn algebras() -> Vec<(&'static str, LieAlgebra)> {
    vec![
        ("abelian2", LieAlgebra::abelian(2)),
        ("heisenberg", LieAlgebra::heisenberg()),
        ("sl2", LieAlgebra::sl2()),
        ("aff1", LieAlgebra::aff1()),
    ]
}

fn random_cochain(rng: &mut ChaCha8Rng, ce: &CeComplex, q: usize) -> Cochain {
    let coeffs: Vec<Scalar> = (0..ce.cochain_dim(q))
        .map(|_| match rng.gen_range(0..4) {
            0 => int(0),
            1 => int(rng.gen_range(-3..=3)),
            _ => rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
        })
        .collect();
    ce.from_coeffs(q, coeffs).unwrap()
}

fn deg(c: &Cochain) -> i64 {
    c.degree()
}

#[test]
fn antisymmetry_and_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, g) in algebras() {
        let ce = CeComplex::new(g).unwrap();
        let n = ce.lie().dim();
        for _ in 0..60 {
            let p = rng.gen_range(0..=n.min(3));
            let q = rng.gen_range(0..=n.min(3));
            if p + q == 0 || p + q > n + 1 {
                continue;
            }
            let phi = random_cochain(&mut rng, &ce, p);
            let psi = random_cochain(&mut rng, &ce, q);
            let ab = ce.bracket(&phi, &psi).unwrap();
            let ba = ce.bracket(&psi, &phi).unwrap();
            assert_eq!(ab, ba.scale(&-sign(deg(&phi) * deg(&psi))), "{name} antisymmetry p={p} q={q}");

            let lhs = ce.differential(&ab).unwrap();
            let t1 = ce.bracket(&ce.differential(&phi).unwrap(), &psi).unwrap();
            let t2 = ce.bracket(&phi, &ce.differential(&psi).unwrap()).unwrap();
            let rhs = t1.add(&t2.scale(&sign(deg(&phi)))).unwrap();
            assert_eq!(lhs, rhs, "{name} leibniz p={p} q={q}");
        }
    }
}

#[test]
fn jacobi_and_square_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (name, g) in algebras() {
        let ce = CeComplex::new(g).unwrap();
        let n = ce.lie().dim();
        for _ in 0..60 {
            let a = rng.gen_range(1..=n.min(3));
            let b = rng.gen_range(1..=n.min(3));
            let c = rng.gen_range(0..=n.min(3));
            if a + b + c > n + 2 {
                continue;
            }
            let x = random_cochain(&mut rng, &ce, a);
            let y = random_cochain(&mut rng, &ce, b);
            let z = random_cochain(&mut rng, &ce, c);
            let (dx, dy, dz) = (deg(&x), deg(&y), deg(&z));
            let j1 = ce.bracket(&ce.bracket(&x, &y).unwrap(), &z).unwrap().scale(&sign(dx * dz));
            let j2 = ce.bracket(&ce.bracket(&y, &z).unwrap(), &x).unwrap().scale(&sign(dy * dx));
            let j3 = ce.bracket(&ce.bracket(&z, &x).unwrap(), &y).unwrap().scale(&sign(dz * dy));
            assert!(j1.add(&j2).unwrap().add(&j3).unwrap().is_zero(), "{name} jacobi {a} {b} {c}");

            let dd = ce.differential(&ce.differential(&z).unwrap()).unwrap();
            assert!(dd.is_zero(), "{name} δ² arity {c}");
        }
    }
}

#[test]
fn differential_is_bracket_with_m() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (name, g) in algebras() {
        let ce = CeComplex::new(g).unwrap();
        let m = ce.bracket_cochain();
        assert!(ce.bracket(&m, &m).unwrap().is_zero(), "{name} [m,m]");
        for p in 0..=ce.lie().dim() {
            let phi = random_cochain(&mut rng, &ce, p);
            let expected = ce.bracket(&m, &phi).unwrap();
            assert_eq!(ce.differential(&phi).unwrap(), expected, "{name} arity {p}");
        }
    }
}
