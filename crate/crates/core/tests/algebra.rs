//! Exact-identity and soft-logic tests for the composition operations.

use mlpalg_core::algebra::{
    align_depths, complement, component, conjunction, difference, i_product, identical_extension,
    multi_i_product, multi_i_product_with_threshold, multi_o_product, multi_sum, o_product,
    set_difference, sum, AlgebraError, Sharpness,
};
use mlpalg_core::{sigmoid, Activation, Matrix, Mlp};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lambda(v: f64) -> Sharpness {
    Sharpness::new(v).unwrap()
}

/// Random all-sigmoid net with the given endpoints and hidden sizes in 1..=4.
fn random_net(rng: &mut ChaCha8Rng, depth: usize, input_dim: usize, output_dim: usize) -> Mlp {
    let mut dims = vec![input_dim];
    for _ in 0..depth.saturating_sub(2) {
        dims.push(rng.gen_range(1..=4));
    }
    dims.push(output_dim);
    let mut weights = Vec::new();
    let mut thresholds = Vec::new();
    let mut acts = Vec::new();
    for i in 0..dims.len() - 1 {
        weights.push(Matrix::from_fn(dims[i + 1], dims[i], |_, _| {
            rng.gen_range(-2.0..2.0)
        }));
        thresholds.push((0..dims[i + 1]).map(|_| rng.gen_range(-2.0..2.0)).collect());
        acts.push(Activation::Sigmoid);
    }
    Mlp::new_uniform(weights, thresholds, &acts).unwrap()
}

fn random_x(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect()
}

/// Scalar net of depth 3 whose output is sigma(z0) for every input.
fn const_net(z0: f64) -> Mlp {
    Mlp::new_uniform(
        vec![
            Matrix::from_rows(&[vec![0.0]]).unwrap(),
            Matrix::from_rows(&[vec![0.0]]).unwrap(),
        ],
        vec![vec![0.0], vec![-z0]],
        &[Activation::Sigmoid, Activation::Sigmoid],
    )
    .unwrap()
}

/// Operand whose output is within 0.01 of the given boolean.
fn boolean_net(on: bool) -> Mlp {
    const_net(if on { 12.0 } else { -12.0 })
}

fn assert_bits_eq(a: &Mlp, b: &Mlp) {
    assert_eq!(a.layer_dims(), b.layer_dims());
    for (wa, wb) in a.weights().iter().zip(b.weights()) {
        for (x, y) in wa.data().iter().zip(wb.data()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
    for (ta, tb) in a.thresholds().iter().zip(b.thresholds()) {
        for (x, y) in ta.iter().zip(tb) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
    assert_eq!(a.activations(), b.activations());
}

#[test]
fn complement_is_one_minus_output() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let depth = rng.gen_range(3..=5);
        let out_dim = rng.gen_range(1..=3);
        let net = random_net(&mut rng, depth, 2, out_dim);
        let comp = complement(&net).unwrap();
        for _ in 0..5 {
            let x = random_x(&mut rng, 2);
            let y = net.forward(&x).unwrap();
            let yc = comp.forward(&x).unwrap();
            for (a, b) in y.iter().zip(&yc) {
                assert!((b - (1.0 - a)).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn complement_is_an_involution_on_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let net = random_net(&mut rng, 4, 3, 2);
    let twice = complement(&complement(&net).unwrap()).unwrap();
    assert_bits_eq(&net, &twice);
}

#[test]
fn complement_flips_saturated_outputs() {
    // Output sigma(z) with z <= -14, so net(x) <= 1e-6 everywhere.
    let net = Mlp::new_uniform(
        vec![
            Matrix::from_rows(&[vec![1.0]]).unwrap(),
            Matrix::from_rows(&[vec![20.0]]).unwrap(),
        ],
        vec![vec![0.0], vec![34.0]],
        &[Activation::Sigmoid, Activation::Sigmoid],
    )
    .unwrap();
    let comp = complement(&net).unwrap();
    for x in [-3.0, -0.5, 0.0, 0.5, 3.0] {
        let y = net.forward(&[x]).unwrap()[0];
        let yc = comp.forward(&[x]).unwrap()[0];
        assert!(y <= 1e-6);
        assert!(yc >= 1.0 - 1e-6);
    }
}

#[test]
fn complement_known_final_preactivation() {
    // Final pre-activation z = 2 at x = 0: net(0) = sigma(2), complement = sigma(-2).
    let net = Mlp::new_uniform(
        vec![
            Matrix::from_rows(&[vec![0.0]]).unwrap(),
            Matrix::from_rows(&[vec![0.0]]).unwrap(),
        ],
        vec![vec![0.0], vec![-2.0]],
        &[Activation::Sigmoid, Activation::Sigmoid],
    )
    .unwrap();
    let y = net.forward(&[0.0]).unwrap()[0];
    let yc = complement(&net).unwrap().forward(&[0.0]).unwrap()[0];
    assert!((y - 0.880_797_077_977_882_4).abs() < 1e-15);
    assert!((yc - 0.119_202_922_022_117_56).abs() < 1e-15);
}

#[test]
fn complement_preconditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let shallow = random_net(&mut rng, 2, 2, 1);
    assert_eq!(
        complement(&shallow),
        Err(AlgebraError::TooShallow { depth: 2, min: 3 })
    );

    let relu_final = identical_extension(&random_net(&mut rng, 3, 2, 1)).unwrap();
    assert_eq!(
        complement(&relu_final),
        Err(AlgebraError::FinalMapNotSigmoid { operand: 1 })
    );
}

#[test]
fn sum_layer_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let a = random_net(&mut rng, 3, 2, 1);
    let b = random_net(&mut rng, 3, 2, 1);
    // Force hidden size 3 on both.
    let a = with_hidden_three(&a, &mut rng);
    let b = with_hidden_three(&b, &mut rng);
    let s = sum(&a, &b, lambda(20.0)).unwrap();
    assert_eq!(s.layer_dims(), &[2, 6, 2, 1]);
}

fn with_hidden_three(net: &Mlp, rng: &mut ChaCha8Rng) -> Mlp {
    let dims: Vec<usize> = net.layer_dims().to_vec();
    let mut fixed = [dims[0], 3, 1];
    fixed[0] = dims[0];
    let mut weights = Vec::new();
    let mut thresholds = Vec::new();
    for i in 0..fixed.len() - 1 {
        weights.push(Matrix::from_fn(fixed[i + 1], fixed[i], |_, _| {
            rng.gen_range(-2.0..2.0)
        }));
        thresholds.push((0..fixed[i + 1]).map(|_| rng.gen_range(-2.0..2.0)).collect());
    }
    Mlp::new_uniform(weights, thresholds, &[Activation::Sigmoid, Activation::Sigmoid]).unwrap()
}

#[test]
fn sum_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let lam = 20.0;
    for _ in 0..200 {
        let depth = rng.gen_range(2..=4);
        let a = random_net(&mut rng, depth, 3, 1);
        let b = random_net(&mut rng, depth, 3, 1);
        let s = sum(&a, &b, lambda(lam)).unwrap();
        for _ in 0..5 {
            let x = random_x(&mut rng, 3);
            let expected = sigmoid(lam * (a.forward(&x).unwrap()[0] + b.forward(&x).unwrap()[0]) - 0.5 * lam);
            let actual = s.forward(&x).unwrap()[0];
            assert!((actual - expected).abs() <= 1e-12);
        }
    }
}

#[test]
fn sum_soft_or_saturation() {
    let lam = 20.0;
    let on_off = sum(&boolean_net(true), &boolean_net(false), lambda(lam)).unwrap();
    let out = on_off.forward(&[0.0]).unwrap()[0];
    // Approximately sigma(10); operand outputs are within 0.01 of {1, 0}.
    assert!((out - 0.999_954_602_131_297_6).abs() < 1e-3);
    assert!(out > 0.5);

    let off_off = sum(&boolean_net(false), &boolean_net(false), lambda(lam)).unwrap();
    let out = off_off.forward(&[0.0]).unwrap()[0];
    assert!((out - 4.539_786_870_243_439e-5).abs() < 1e-3);
    assert!(out < 0.5);
}

#[test]
fn sum_preconditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let a = random_net(&mut rng, 3, 2, 1);
    let deeper = random_net(&mut rng, 4, 2, 1);
    assert!(matches!(
        sum(&a, &deeper, lambda(20.0)),
        Err(AlgebraError::DepthMismatch { operand: 2, .. })
    ));

    let wider = random_net(&mut rng, 3, 3, 1);
    assert!(matches!(
        sum(&a, &wider, lambda(20.0)),
        Err(AlgebraError::InputDimMismatch { operand: 2, .. })
    ));

    let multi_out = random_net(&mut rng, 3, 2, 2);
    assert!(matches!(
        sum(&a, &multi_out, lambda(20.0)),
        Err(AlgebraError::NonScalarOutput { operand: 2, .. })
    ));

    assert!(matches!(
        Sharpness::new(0.0),
        Err(AlgebraError::InvalidSharpness { .. })
    ));
}

#[test]
fn multi_sum_two_equals_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let a = random_net(&mut rng, 3, 2, 1);
    let b = random_net(&mut rng, 3, 2, 1);
    let via_sum = sum(&a, &b, lambda(20.0)).unwrap();
    let via_multi = multi_sum(&[a, b], lambda(20.0)).unwrap();
    assert_bits_eq(&via_sum, &via_multi);
}

#[test]
fn multi_sum_is_or_over_three() {
    let lam = 20.0;
    let all_off = multi_sum(
        &[boolean_net(false), boolean_net(false), boolean_net(false)],
        lambda(lam),
    )
    .unwrap();
    assert!(all_off.forward(&[0.0]).unwrap()[0] < 1e-3);

    let one_on = multi_sum(
        &[boolean_net(false), boolean_net(true), boolean_net(false)],
        lambda(lam),
    )
    .unwrap();
    assert!(one_on.forward(&[0.0]).unwrap()[0] > 1.0 - 1e-3);
}

#[test]
fn multi_sum_singleton_keeps_decisions() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let net = random_net(&mut rng, 3, 2, 1);
    let wrapped = multi_sum(core::slice::from_ref(&net), lambda(20.0)).unwrap();
    for _ in 0..1000 {
        let x = random_x(&mut rng, 2);
        let d0 = net.forward(&x).unwrap()[0] >= 0.5;
        let d1 = wrapped.forward(&x).unwrap()[0] >= 0.5;
        assert_eq!(d0, d1);
    }
    assert!(matches!(
        multi_sum(&[], lambda(20.0)),
        Err(AlgebraError::TooFewOperands { required: 1, actual: 0 })
    ));
}

#[test]
fn difference_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let lam = 20.0;
    for _ in 0..200 {
        let a = random_net(&mut rng, 3, 2, 1);
        let b = random_net(&mut rng, 3, 2, 1);
        let d = difference(&a, &b, lambda(lam)).unwrap();
        for _ in 0..5 {
            let x = random_x(&mut rng, 2);
            let expected = sigmoid(
                lam * (a.forward(&x).unwrap()[0] + 1.0 - b.forward(&x).unwrap()[0]) - 0.5 * lam,
            );
            assert!((d.forward(&x).unwrap()[0] - expected).abs() <= 1e-12);
        }
    }
}

#[test]
fn difference_is_or_with_complement_not_set_minus() {
    let lam = lambda(20.0);
    let table = [
        ((true, true), true),
        ((false, true), false),
        // Both off: OR(n1, NOT n2) fires even though n1 does not.
        ((false, false), true),
        ((true, false), true),
    ];
    for ((b1, b2), expected) in table {
        let d = difference(&boolean_net(b1), &boolean_net(b2), lam).unwrap();
        assert_eq!(d.forward(&[0.0]).unwrap()[0] >= 0.5, expected, "pattern {b1}/{b2}");
    }
}

#[test]
fn conjunction_is_and() {
    let lam = lambda(20.0);
    for (b1, b2) in [(true, true), (true, false), (false, true), (false, false)] {
        let c = conjunction(&boolean_net(b1), &boolean_net(b2), lam).unwrap();
        assert_eq!(c.forward(&[0.0]).unwrap()[0] >= 0.5, b1 && b2);
    }
}

#[test]
fn set_difference_is_and_not() {
    let lam = lambda(20.0);
    for (b1, b2) in [(true, true), (true, false), (false, true), (false, false)] {
        let d = set_difference(&boolean_net(b1), &boolean_net(b2), lam).unwrap();
        assert_eq!(d.forward(&[0.0]).unwrap()[0] >= 0.5, b1 && !b2);
    }
}

#[test]
fn i_product_layer_structure_and_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let a = with_hidden_three(&random_net(&mut rng, 3, 2, 1), &mut rng);
    let b = with_hidden_three(&random_net(&mut rng, 3, 2, 1), &mut rng);
    let p = i_product(&a, &b, lambda(20.0)).unwrap();
    assert_eq!(p.layer_dims(), &[4, 6, 2, 1]);

    let lam = 20.0;
    for _ in 0..200 {
        let depth = rng.gen_range(2..=4);
        let a = random_net(&mut rng, depth, 2, 1);
        let b = random_net(&mut rng, depth, 3, 1);
        let p = i_product(&a, &b, lambda(lam)).unwrap();
        assert_eq!(p.input_dim(), 5);
        for _ in 0..5 {
            let xa = random_x(&mut rng, 2);
            let xb = random_x(&mut rng, 3);
            let joint: Vec<f64> = xa.iter().chain(&xb).copied().collect();
            let expected = sigmoid(
                lam * (a.forward(&xa).unwrap()[0] + b.forward(&xb).unwrap()[0]) - 1.5 * lam,
            );
            assert!((p.forward(&joint).unwrap()[0] - expected).abs() <= 1e-12);
        }
    }
}

#[test]
fn i_product_saturation_examples() {
    let lam = 20.0;
    let both_on = i_product(&boolean_net(true), &boolean_net(true), lambda(lam)).unwrap();
    let out = both_on.forward(&[0.0, 0.0]).unwrap()[0];
    assert!((out - 0.999_954_602_131_297_6).abs() < 1e-3);

    let one_off = i_product(&boolean_net(true), &boolean_net(false), lambda(lam)).unwrap();
    let out = one_off.forward(&[0.0, 0.0]).unwrap()[0];
    assert!((out - 4.539_786_870_243_439e-5).abs() < 1e-3);
}

#[test]
fn multi_i_product_two_equals_i_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let a = random_net(&mut rng, 3, 2, 1);
    let b = random_net(&mut rng, 3, 4, 1);
    let direct = i_product(&a, &b, lambda(20.0)).unwrap();
    let multi = multi_i_product(&[a, b], lambda(20.0)).unwrap();
    assert_bits_eq(&direct, &multi);
}

#[test]
fn multi_i_product_is_and_only_for_all_on() {
    // Brute force over all 2^3 operand patterns: only (1,1,1) fires.
    let lam = lambda(20.0);
    for bits in 0..8u32 {
        let nets: Vec<Mlp> = (0..3).map(|i| boolean_net(bits & (1 << i) != 0)).collect();
        let p = multi_i_product(&nets, lam).unwrap();
        let out = p.forward(&[0.0, 0.0, 0.0]).unwrap()[0];
        assert_eq!(out >= 0.5, bits == 0b111, "pattern {bits:03b}");
    }
}

#[test]
fn fixed_threshold_overfires_on_two_of_three() {
    // With the binary-case threshold 1.5 lambda kept at m = 3, the pattern
    // (1,1,0) already fires: sigma(2 lambda - 1.5 lambda) is near 1. The
    // m-dependent threshold (m - 0.5) lambda is what makes the AND table
    // above come out right.
    let lam = lambda(20.0);
    let nets = vec![boolean_net(true), boolean_net(true), boolean_net(false)];
    let fixed = multi_i_product_with_threshold(&nets, lam, 1.5 * 20.0).unwrap();
    let out = fixed.forward(&[0.0, 0.0, 0.0]).unwrap()[0];
    assert!(out >= 0.5, "1.5 lambda threshold must fire on (1,1,0), got {out}");

    let corrected = multi_i_product(&nets, lam).unwrap();
    assert!(corrected.forward(&[0.0, 0.0, 0.0]).unwrap()[0] < 0.5);
}

#[test]
fn component_extracts_exact_coordinate() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let net = random_net(&mut rng, 4, 3, 10);
    let first = component(&net, 1).unwrap();
    assert_eq!(first.output_dim(), 1);
    for _ in 0..1000 {
        let x = random_x(&mut rng, 3);
        let full = net.forward(&x).unwrap();
        let one = first.forward(&x).unwrap()[0];
        assert_eq!(one.to_bits(), full[0].to_bits());
    }
    assert_eq!(
        component(&net, 11),
        Err(AlgebraError::ComponentOutOfRange { index: 11, output_dim: 10 })
    );
    assert_eq!(
        component(&net, 0),
        Err(AlgebraError::ComponentOutOfRange { index: 0, output_dim: 10 })
    );
}

#[test]
fn o_product_pairs_outputs_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let a = with_hidden_three(&random_net(&mut rng, 3, 2, 1), &mut rng);
    let b = with_hidden_three(&random_net(&mut rng, 3, 2, 1), &mut rng);
    let p = o_product(&a, &b).unwrap();
    assert_eq!(p.layer_dims(), &[2, 6, 2]);
    for _ in 0..1000 {
        let x = random_x(&mut rng, 2);
        let pair = p.forward(&x).unwrap();
        assert_eq!(pair[0].to_bits(), a.forward(&x).unwrap()[0].to_bits());
        assert_eq!(pair[1].to_bits(), b.forward(&x).unwrap()[0].to_bits());
    }
}

#[test]
fn component_inverts_o_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let a = random_net(&mut rng, 3, 2, 1);
    let b = random_net(&mut rng, 3, 2, 1);
    let p = o_product(&a, &b).unwrap();
    let back = component(&p, 2).unwrap();
    for _ in 0..200 {
        let x = random_x(&mut rng, 2);
        assert_eq!(
            back.forward(&x).unwrap()[0].to_bits(),
            b.forward(&x).unwrap()[0].to_bits()
        );
    }
    // Extracting from the stacked pair classifies identically to operand 1.
    let first = component(&p, 1).unwrap();
    for _ in 0..200 {
        let x = random_x(&mut rng, 2);
        assert_eq!(
            first.forward(&x).unwrap()[0] >= 0.5,
            a.forward(&x).unwrap()[0] >= 0.5
        );
    }
}

#[test]
fn multi_o_product_matches_pairwise_and_indexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let a = random_net(&mut rng, 3, 2, 1);
    let b = random_net(&mut rng, 3, 2, 1);
    let two = multi_o_product(&[a.clone(), b.clone()]).unwrap();
    assert_bits_eq(&two, &o_product(&a, &b).unwrap());

    let nets: Vec<Mlp> = (0..5).map(|_| random_net(&mut rng, 3, 2, 1)).collect();
    let stacked = multi_o_product(&nets).unwrap();
    assert_eq!(stacked.output_dim(), 5);
    for _ in 0..200 {
        let x = random_x(&mut rng, 2);
        let outs = stacked.forward(&x).unwrap();
        for (i, net) in nets.iter().enumerate() {
            assert_eq!(outs[i].to_bits(), net.forward(&x).unwrap()[0].to_bits());
        }
    }
    for (i, net) in nets.iter().enumerate() {
        let extracted = component(&stacked, i + 1).unwrap();
        let x = random_x(&mut rng, 2);
        assert_eq!(
            extracted.forward(&x).unwrap()[0].to_bits(),
            net.forward(&x).unwrap()[0].to_bits()
        );
    }

    assert!(matches!(
        multi_o_product(&nets[..1]),
        Err(AlgebraError::TooFewOperands { required: 2, actual: 1 })
    ));
}

#[test]
fn identical_extension_preserves_outputs_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..200 {
        let depth = rng.gen_range(2..=4);
        let out_dim = rng.gen_range(1..=3);
        let net = random_net(&mut rng, depth, 2, out_dim);
        let ext = identical_extension(&net).unwrap();
        assert_eq!(ext.depth(), net.depth() + 1);
        for _ in 0..5 {
            let x = random_x(&mut rng, 2);
            let y = net.forward(&x).unwrap();
            let ye = ext.forward(&x).unwrap();
            for (a, b) in y.iter().zip(&ye) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}

#[test]
fn identical_extension_composes_and_tracks_dims() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let net = with_hidden_three(&random_net(&mut rng, 3, 2, 1), &mut rng);
    assert_eq!(net.layer_dims(), &[2, 3, 1]);
    let once = identical_extension(&net).unwrap();
    assert_eq!(once.layer_dims(), &[2, 3, 1, 1]);
    let twice = identical_extension(&once).unwrap();
    assert_eq!(twice.layer_dims(), &[2, 3, 1, 1, 1]);
    let x = [0.4, -1.0];
    assert_eq!(
        twice.forward(&x).unwrap()[0].to_bits(),
        net.forward(&x).unwrap()[0].to_bits()
    );
}

#[test]
fn identical_extension_rejects_plain_relu_output() {
    let relu_out = Mlp::new_uniform(
        vec![
            Matrix::from_fn(2, 2, |_, _| 1.0),
            Matrix::from_fn(1, 2, |_, _| 1.0),
        ],
        vec![vec![0.0; 2], vec![0.0]],
        &[Activation::Sigmoid, Activation::Relu],
    )
    .unwrap();
    assert_eq!(
        identical_extension(&relu_out),
        Err(AlgebraError::OutputNotUnitRange { operand: 1 })
    );
}

#[test]
fn align_depths_extends_the_shallower() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let shallow = random_net(&mut rng, 3, 2, 1);
    let deep = random_net(&mut rng, 5, 2, 1);
    let (a, b) = align_depths(&shallow, &deep).unwrap();
    assert_eq!(a.depth(), 5);
    assert_eq!(b.depth(), 5);
    assert_bits_eq(&b, &deep);

    let (c, d) = align_depths(&deep, &shallow).unwrap();
    assert_eq!(c.depth(), 5);
    assert_eq!(d.depth(), 5);

    let (e, f) = align_depths(&shallow, &shallow).unwrap();
    assert_bits_eq(&e, &shallow);
    assert_bits_eq(&f, &shallow);
}

#[test]
fn sum_after_align_matches_closed_form_decisions() {
    // The aligned operand ends in identity ReLU layers, so the stacked
    // result mixes activations inside shared layers; its output must still
    // be the plain sum closed form of the original nets.
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    let lam = 20.0;
    let a = random_net(&mut rng, 3, 2, 1);
    let b = random_net(&mut rng, 5, 2, 1);
    let (a_ext, b_same) = align_depths(&a, &b).unwrap();
    let s = sum(&a_ext, &b_same, lambda(lam)).unwrap();
    for _ in 0..1000 {
        let x = random_x(&mut rng, 2);
        let expected = sigmoid(lam * (a.forward(&x).unwrap()[0] + b.forward(&x).unwrap()[0]) - 0.5 * lam);
        let actual = s.forward(&x).unwrap()[0];
        assert!((actual - expected).abs() <= 1e-12);
        assert_eq!(actual >= 0.5, expected >= 0.5);
    }
}

#[test]
fn operations_do_not_mutate_operands() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let a = random_net(&mut rng, 3, 2, 1);
    let b = random_net(&mut rng, 3, 2, 1);
    let a_before = a.clone();
    let b_before = b.clone();
    let _ = complement(&a).unwrap();
    let _ = sum(&a, &b, lambda(20.0)).unwrap();
    let _ = i_product(&a, &b, lambda(20.0)).unwrap();
    let _ = o_product(&a, &b).unwrap();
    let _ = identical_extension(&a).unwrap();
    assert_bits_eq(&a, &a_before);
    assert_bits_eq(&b, &b_before);
}

#[test]
fn sharpening_moves_outputs_toward_extremes() {
    let on = boolean_net(true);
    let off = boolean_net(false);
    let lambdas = [5.0, 10.0, 20.0, 40.0];

    // One operand on: soft OR output rises with lambda.
    let mut prev = 0.0;
    for lam in lambdas {
        let out = sum(&on, &off, lambda(lam)).unwrap().forward(&[0.0]).unwrap()[0];
        assert!(out > prev);
        prev = out;
    }
    // Both off: soft OR output falls with lambda.
    let mut prev = 1.0;
    for lam in lambdas {
        let out = sum(&off, &off, lambda(lam)).unwrap().forward(&[0.0]).unwrap()[0];
        assert!(out < prev);
        prev = out;
    }
    // Both on: soft AND output rises with lambda.
    let mut prev = 0.0;
    for lam in lambdas {
        let out = i_product(&on, &on, lambda(lam))
            .unwrap()
            .forward(&[0.0, 0.0])
            .unwrap()[0];
        assert!(out > prev);
        prev = out;
    }
}
