use mgideal::determinantal::{GradedMatrix, GradingMode};
use mgideal::theory::{self, CheckOptions, Verdict};
use mgideal::{BlockRing, Ideal, Multidegree, Polynomial};

fn x(r: &BlockRing, i: usize, j: usize) -> Polynomial {
    Polynomial::var(r, i, j)
}

fn setup() -> (BlockRing, Ideal, Polynomial) {
    let ring = BlockRing::with_blocks(&[3, 3, 3]).unwrap();
    let z = Polynomial::zero(&ring);
    let m = GradedMatrix::from_entries(
        &ring,
        GradingMode::Row,
        vec![
            vec![x(&ring, 1, 1), x(&ring, 1, 2), x(&ring, 1, 3)],
            vec![x(&ring, 2, 1), x(&ring, 2, 2), z.clone()],
            vec![z.clone(), z, x(&ring, 3, 3)],
        ],
    )
    .unwrap();
    let i = m.minors_ideal(2).unwrap();
    let f = &(&(&x(&ring, 1, 1) * &x(&ring, 2, 1)) * &x(&ring, 3, 2))
        + &(&(&x(&ring, 1, 3) * &x(&ring, 2, 3)) * &x(&ring, 3, 3));
    (ring, i, f)
}

#[test]
fn colon_by_cubic_leaves_cs() {
    let (ring, i, f) = setup();
    let colon = i.colon(&f).unwrap();
    let expected = i.add_generators(&[
        &x(&ring, 1, 2) * &x(&ring, 1, 3),
        &x(&ring, 1, 1) * &x(&ring, 1, 3),
    ]);
    assert!(colon.same_ideal(&expected).unwrap());
    let degrees: Vec<Multidegree> = colon
        .minimal_generators()
        .unwrap()
        .iter()
        .map(|g| g.multidegree(&ring).unwrap())
        .collect();
    assert!(degrees.contains(&Multidegree(vec![2, 0, 0])));
    let opts = CheckOptions::default();
    assert_eq!(theory::is_cs(&colon, &opts).unwrap().verdict, Verdict::No);
    assert_eq!(theory::is_cs(&i, &opts).unwrap().verdict, Verdict::Yes);
}
