#![allow(dead_code)]

use mpl2::intlat::{subgroup_generated, AbElem};
use mpl2::quotients::CongruenceDescriptor;
use mpl2::sconstruct::SParams;

/// `S(Z_4×Z_2 × Z_4, c)` with `c = ((0,0),(1,0),(1,0),(2,1))`.
pub fn thirty_two_point() -> SParams {
    SParams::from_raw(&[4, 2], 4, &[vec![0, 0], vec![1, 0], vec![1, 0], vec![2, 1]]).unwrap()
}

/// The 12-point solution `S(Z_2×Z_6, (0,1,1,0,1,1))`.
pub fn twelve_point() -> SParams {
    SParams::from_raw(&[2], 6, &[vec![0], vec![1], vec![1], vec![0], vec![1], vec![1]]).unwrap()
}

pub fn theta(p: &SParams, m: usize, h: &[Vec<i64>], r: &[i64]) -> CongruenceDescriptor {
    let g = p.group();
    let gens: Vec<AbElem> = h.iter().map(|x| g.elem(x).unwrap()).collect();
    CongruenceDescriptor::new(p, m, subgroup_generated(g, &gens), &g.elem(r).unwrap()).unwrap()
}

/// `S(2Z_{2^m}×Z_2, (0,−2))` written over `Z_{2^{m−1}}`.
pub fn dihedral_params(m: u32) -> SParams {
    SParams::from_raw(&[1 << (m - 1)], 2, &[vec![0], vec![-1]]).unwrap()
}

/// `S(2Z_{2^m}×Z_4, (0,2^{m−1}−2,0,2^{m−1}−2))` over `Z_{2^{m−1}}`, with the twist `2^{m−1}`.
pub fn quaternion_params(m: u32) -> (SParams, CongruenceDescriptor) {
    let half = 1i64 << (m - 2);
    let p = SParams::from_raw(&[2 * half], 4, &[vec![0], vec![half - 1], vec![0], vec![half - 1]]).unwrap();
    let d = theta(&p, 2, &[], &[half]);
    (p, d)
}
