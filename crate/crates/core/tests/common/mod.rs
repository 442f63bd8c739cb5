#![allow(dead_code)]

use std::path::PathBuf;

use wirescat::Complex64;

pub struct BesselRef {
    pub order: Complex64,
    pub x: f64,
    pub value: Complex64,
}

pub struct GammaRef {
    pub z: Complex64,
    pub value: Complex64,
}

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn parse_row(line: &str) -> Vec<f64> {
    line.split(',')
        .map(|f| f.trim().parse::<f64>().expect("numeric fixture field"))
        .collect()
}

pub fn bessel_reference() -> Vec<BesselRef> {
    let text = fixture("specfun_reference.csv");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re_order,im_order,x,re_value,im_value"));
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v = parse_row(l);
            BesselRef {
                order: Complex64::new(v[0], v[1]),
                x: v[2],
                value: Complex64::new(v[3], v[4]),
            }
        })
        .collect()
}

pub fn gamma_reference() -> Vec<GammaRef> {
    let text = fixture("gamma_reference.csv");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re_z,im_z,re_value,im_value"));
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v = parse_row(l);
            GammaRef {
                z: Complex64::new(v[0], v[1]),
                value: Complex64::new(v[2], v[3]),
            }
        })
        .collect()
}

pub fn rel_err(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}
