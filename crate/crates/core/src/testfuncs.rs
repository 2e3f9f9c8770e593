//! Parametric bivariate test functions with closed-form partials, declared
//! modularity classes, and a finite-difference classifier.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Modularity classes on the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModularityClass {
    /// `φ_xy ≤ 0`.
    Sub,
    /// `φ_xy ≥ 0`.
    Super,
    /// `Sub` with `φ_xx, φ_yy ≤ 0`, `φ_xxy, φ_xyy ≥ 0`, `φ_xxyy ≤ 0`.
    SubSub,
    /// `Super` with `φ_xx, φ_yy ≤ 0`, `φ_xxy, φ_xyy ≤ 0`, `φ_xxyy ≥ 0`.
    SuperSuper,
}

impl ModularityClass {
    pub const ALL: [ModularityClass; 4] = [
        ModularityClass::Sub,
        ModularityClass::Super,
        ModularityClass::SubSub,
        ModularityClass::SuperSuper,
    ];

    /// Whether membership in `self` implies membership in `other`.
    pub fn implies(self, other: ModularityClass) -> bool {
        use ModularityClass::*;
        self == other || matches!((self, other), (SubSub, Sub) | (SuperSuper, Super))
    }
}

impl fmt::Display for ModularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModularityClass::Sub => "M-",
            ModularityClass::Super => "M+",
            ModularityClass::SubSub => "M--",
            ModularityClass::SuperSuper => "M++",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    CobbDouglas { a: f64, b: f64 },
    ModularComplement { lambda: f64 },
    NegComplementPower { p: f64, q: f64 },
    Constant(f64),
    Cone(Vec<(f64, TestFunction)>),
}

/// A bivariate function on `[0, 1]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    kind: Kind,
    class: Option<ModularityClass>,
    increasing: bool,
    concave: bool,
}

/// `r (r − 1) ⋯ (r − k + 1)`.
fn falling(r: f64, k: u32) -> f64 {
    (0..k).map(|i| r - i as f64).product()
}

/// `d^k/dz^k z^r`, zero where the falling factorial vanishes.
fn power_derivative(z: f64, r: f64, k: u32) -> f64 {
    let c = falling(r, k);
    if c == 0.0 {
        0.0
    } else {
        c * z.powf(r - k as f64)
    }
}

impl TestFunction {
    /// `x^a y^b`, `0 < a, b ≤ 1`.
    pub fn cobb_douglas(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0 && b > 0.0 && b <= 1.0) {
            return invalid(format!("cobb_douglas exponents ({a}, {b}) outside (0, 1]"));
        }
        Ok(TestFunction {
            kind: Kind::CobbDouglas { a, b },
            class: Some(ModularityClass::SuperSuper),
            increasing: true,
            concave: true,
        })
    }

    /// `x + y − λxy`, `0 ≤ λ ≤ 1`.
    pub fn modular_complement(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return invalid(format!("modular_complement λ = {lambda} outside [0, 1]"));
        }
        Ok(TestFunction {
            kind: Kind::ModularComplement { lambda },
            class: Some(ModularityClass::SubSub),
            increasing: true,
            concave: true,
        })
    }

    /// `−(1 − x)^p (1 − y)^q`, `p, q ≥ 1`.
    pub fn neg_complement_power(p: f64, q: f64) -> Result<Self> {
        if !(p >= 1.0 && q >= 1.0) || !p.is_finite() || !q.is_finite() {
            return invalid(format!("neg_complement_power exponents ({p}, {q}) below 1"));
        }
        Ok(TestFunction {
            kind: Kind::NegComplementPower { p, q },
            class: Some(ModularityClass::SubSub),
            increasing: true,
            concave: true,
        })
    }

    pub fn constant(c: f64) -> Self {
        TestFunction {
            kind: Kind::Constant(c),
            class: None,
            increasing: true,
            concave: true,
        }
    }

    /// Nonnegative combination of functions sharing one class tag.
    pub fn cone_combine(fs: Vec<TestFunction>, ws: Vec<f64>) -> Result<Self> {
        if fs.is_empty() || fs.len() != ws.len() {
            return invalid(format!("{} functions with {} weights", fs.len(), ws.len()));
        }
        if ws.iter().any(|w| !(*w >= 0.0 && w.is_finite())) || ws.iter().all(|w| *w == 0.0) {
            return invalid("cone weights must be nonnegative and not all zero");
        }
        let tag = |c: Option<ModularityClass>| c.map_or("none".to_string(), |c| c.to_string());
        let class = fs[0].class;
        if let Some(other) = fs.iter().find(|f| f.class != class) {
            return Err(Error::MixedClasses(tag(class), tag(other.class)));
        }
        let increasing = fs.iter().all(|f| f.increasing);
        let concave = fs.iter().all(|f| f.concave);
        Ok(TestFunction {
            kind: Kind::Cone(ws.into_iter().zip(fs).collect()),
            class,
            increasing,
            concave,
        })
    }

    /// Resolves a registry descriptor such as `cobb_douglas:0.5,0.5`.
    pub fn parse(desc: &str) -> Result<Self> {
        let unknown = || Error::UnknownFunction(format!("{desc}; known: {}", REGISTRY.join(", ")));
        let (name, args) = desc.trim().split_once(':').ok_or_else(unknown)?;
        let args: Vec<f64> = args
            .split(',')
            .map(|a| a.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| unknown())?;
        match (name, args.as_slice()) {
            ("cobb_douglas", &[a, b]) => TestFunction::cobb_douglas(a, b),
            ("modular_complement", &[l]) => TestFunction::modular_complement(l),
            ("neg_complement_power", &[p, q]) => TestFunction::neg_complement_power(p, q),
            ("constant", &[c]) => Ok(TestFunction::constant(c)),
            _ => Err(unknown()),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.partial(0, 0, x, y)
    }

    /// `∂^{dx+dy} φ / ∂x^dx ∂y^dy` at `(x, y)`.
    pub fn partial(&self, dx: u32, dy: u32, x: f64, y: f64) -> f64 {
        match &self.kind {
            Kind::CobbDouglas { a, b } => power_derivative(x, *a, dx) * power_derivative(y, *b, dy),
            Kind::ModularComplement { lambda } => match (dx, dy) {
                (0, 0) => x + y - lambda * x * y,
                (1, 0) => 1.0 - lambda * y,
                (0, 1) => 1.0 - lambda * x,
                (1, 1) => -lambda,
                _ => 0.0,
            },
            Kind::NegComplementPower { p, q } => {
                let sign = if (dx + dy).is_multiple_of(2) { -1.0 } else { 1.0 };
                sign * power_derivative(1.0 - x, *p, dx) * power_derivative(1.0 - y, *q, dy)
            }
            Kind::Constant(c) => {
                if dx == 0 && dy == 0 {
                    *c
                } else {
                    0.0
                }
            }
            Kind::Cone(members) => members
                .iter()
                .filter(|(w, _)| *w != 0.0)
                .map(|(w, f)| w * f.partial(dx, dy, x, y))
                .sum(),
        }
    }

    pub fn class(&self) -> Option<ModularityClass> {
        self.class
    }

    /// Whether membership in `c` follows from the declared tag.
    pub fn belongs_to(&self, c: ModularityClass) -> bool {
        self.class.is_some_and(|d| d.implies(c))
    }

    pub fn is_increasing(&self) -> bool {
        self.increasing
    }

    pub fn is_concave(&self) -> bool {
        self.concave
    }

    pub fn descriptor(&self) -> String {
        match &self.kind {
            Kind::CobbDouglas { a, b } => format!("cobb_douglas:{a},{b}"),
            Kind::ModularComplement { lambda } => format!("modular_complement:{lambda}"),
            Kind::NegComplementPower { p, q } => format!("neg_complement_power:{p},{q}"),
            Kind::Constant(c) => format!("constant:{c}"),
            Kind::Cone(members) => {
                let parts: Vec<String> = members
                    .iter()
                    .map(|(w, f)| format!("{w}*{}", f.descriptor()))
                    .collect();
                format!("cone({})", parts.join(" + "))
            }
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

/// Descriptor templates accepted by [`TestFunction::parse`].
pub const REGISTRY: [&str; 4] = [
    "cobb_douglas:a,b",
    "modular_complement:lambda",
    "neg_complement_power:p,q",
    "constant:c",
];

/// Sign tolerance used by [`classify`].
pub const SIGN_TOL: f64 = 1e-7;

/// Result of a finite-difference sign scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    /// Every class whose sign conditions held at all sample points.
    pub classes: Vec<ModularityClass>,
    /// Preference order `M--`, `M++`, `M-`, `M+` among `classes`.
    pub strongest: Option<ModularityClass>,
    pub increasing: bool,
    pub concave: bool,
}

/// Central difference weights and offsets for one axis.
fn stencil(order: u32) -> &'static [(f64, f64)] {
    match order {
        0 => &[(0.0, 1.0)],
        1 => &[(-1.0, -0.5), (1.0, 0.5)],
        2 => &[(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)],
        _ => unreachable!("own orders above 2 are not needed"),
    }
}

/// Tensor central difference of `φ` for `∂^{dx+dy}/∂x^dx ∂y^dy`, `dx, dy ≤ 2`,
/// with step `s` on both axes. Each factor is an average of the true
/// derivative against a nonnegative kernel, so definite signs survive.
fn fd_partial(phi: &TestFunction, dx: u32, dy: u32, x: f64, y: f64, s: f64) -> f64 {
    let mut acc = 0.0;
    for &(ox, wx) in stencil(dx) {
        for &(oy, wy) in stencil(dy) {
            acc += wx * wy * phi.eval(x + ox * s, y + oy * s);
        }
    }
    acc / s.powi((dx + dy) as i32)
}

/// Estimates signed partials on a `grid_n × grid_n` interior grid and
/// reports the classes whose conditions hold within [`SIGN_TOL`].
///
/// `h` is the first-order step; orders 2, 3, 4 use `10h`, `100h`, `400h`
/// so that truncation stays exact in sign while roundoff stays below the
/// tolerance. Samples keep a distance `401h` from the boundary.
pub fn classify(phi: &TestFunction, grid_n: usize, h: f64) -> Classification {
    let steps = [h, 10.0 * h, 100.0 * h, 400.0 * h];
    let margin = 401.0 * h;
    let n = grid_n.max(2);
    let coord = |k: usize| margin + (1.0 - 2.0 * margin) * k as f64 / (n - 1) as f64;
    let d = |dx: u32, dy: u32, x: f64, y: f64| fd_partial(phi, dx, dy, x, y, steps[(dx + dy - 1) as usize]);
    let nonneg = |v: f64| v >= -SIGN_TOL;
    let nonpos = |v: f64| v <= SIGN_TOL;

    let (mut sub, mut sup, mut subsub, mut supsup) = (true, true, true, true);
    let (mut increasing, mut concave) = (true, true);
    for a in 0..n {
        for b in 0..n {
            let (x, y) = (coord(a), coord(b));
            let xy = d(1, 1, x, y);
            let own = nonpos(d(2, 0, x, y)) && nonpos(d(0, 2, x, y));
            let (xxy, xyy, xxyy) = (d(2, 1, x, y), d(1, 2, x, y), d(2, 2, x, y));
            sub &= nonpos(xy);
            sup &= nonneg(xy);
            subsub &= own && nonneg(xxy) && nonneg(xyy) && nonpos(xxyy);
            supsup &= own && nonpos(xxy) && nonpos(xyy) && nonneg(xxyy);
            increasing &= nonneg(d(1, 0, x, y)) && nonneg(d(0, 1, x, y));
            concave &= own;
        }
    }
    use ModularityClass::*;
    let holds = [(SubSub, sub && subsub), (SuperSuper, sup && supsup), (Sub, sub), (Super, sup)];
    let strongest = holds.iter().find(|(_, ok)| *ok).map(|(c, _)| *c);
    let mut classes: Vec<ModularityClass> =
        holds.iter().filter(|(_, ok)| *ok).map(|(c, _)| *c).collect();
    classes.sort_by_key(|c| ModularityClass::ALL.iter().position(|a| a == c));
    Classification {
        classes,
        strongest,
        increasing,
        concave,
    }
}

/// Largest deviation found when checking each closed-form partial of total
/// order 1 to 4 against a central difference (step `1e-4`) of the closed-form
/// partial one order below, on a 33 × 33 grid over `[0.1, 0.9]²`. Returns the
/// first `(dx, dy, x, y, closed, estimate)` outside `max(1e-5, 1e-3|closed|)`.
pub fn derivative_mismatch(phi: &TestFunction) -> Option<(u32, u32, f64, f64, f64, f64)> {
    const H: f64 = 1e-4;
    const N: usize = 33;
    for dx in 0..=4u32 {
        for dy in 0..=(4 - dx) {
            if dx + dy == 0 {
                continue;
            }
            for a in 0..N {
                for b in 0..N {
                    let x = 0.1 + 0.8 * a as f64 / (N - 1) as f64;
                    let y = 0.1 + 0.8 * b as f64 / (N - 1) as f64;
                    let closed = phi.partial(dx, dy, x, y);
                    let estimate = if dx > 0 {
                        (phi.partial(dx - 1, dy, x + H, y) - phi.partial(dx - 1, dy, x - H, y))
                            / (2.0 * H)
                    } else {
                        (phi.partial(dx, dy - 1, x, y + H) - phi.partial(dx, dy - 1, x, y - H))
                            / (2.0 * H)
                    };
                    if (closed - estimate).abs() > f64::max(1e-5, 1e-3 * closed.abs()) {
                        return Some((dx, dy, x, y, closed, estimate));
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use ModularityClass::*;

    fn classify_default(f: &TestFunction) -> Classification {
        classify(f, 21, 1e-4)
    }

    #[test]
    fn constructors_validate() {
        assert!(TestFunction::cobb_douglas(0.0, 0.5).is_err());
        assert!(TestFunction::cobb_douglas(0.5, 1.5).is_err());
        assert!(TestFunction::modular_complement(-0.1).is_err());
        assert!(TestFunction::modular_complement(1.1).is_err());
        assert!(TestFunction::neg_complement_power(0.5, 2.0).is_err());
        assert!(TestFunction::neg_complement_power(f64::NAN, 2.0).is_err());
    }

    #[test]
    fn closed_forms() {
        let xy = TestFunction::cobb_douglas(1.0, 1.0).unwrap();
        assert_eq!(xy.eval(0.3, 0.5), 0.15);
        assert_eq!(xy.partial(1, 1, 0.3, 0.7), 1.0);
        assert_eq!(xy.partial(2, 0, 0.3, 0.7), 0.0);

        let sq = TestFunction::cobb_douglas(0.5, 0.5).unwrap();
        for &(x, y) in &[(0.1, 0.2), (0.5, 0.5), (0.9, 0.3), (1.0, 1.0)] {
            assert!(sq.partial(1, 1, x, y) >= 0.0);
            assert!(sq.partial(2, 0, x, y) <= 0.0);
            assert!(sq.partial(2, 1, x, y) <= 0.0);
            assert!(sq.partial(2, 2, x, y) >= 0.0);
        }

        let mc = TestFunction::modular_complement(1.0).unwrap();
        assert_eq!(mc.partial(1, 1, 0.2, 0.9), -1.0);
        assert_eq!(mc.eval(1.0, 0.0), 1.0);

        for &(p, q) in &[(1.0, 1.0), (2.0, 3.5), (1.7, 1.0)] {
            let f = TestFunction::neg_complement_power(p, q).unwrap();
            assert_eq!(f.eval(1.0, 1.0), 0.0);
        }
        let f = TestFunction::neg_complement_power(1.0, 1.0).unwrap();
        assert_eq!(f.partial(1, 1, 0.4, 0.6), -1.0);
        assert_eq!(f.partial(2, 0, 1.0, 1.0), 0.0);
        assert!((f.eval(0.25, 0.5) + 0.375).abs() < 1e-15);
    }

    #[test]
    fn classifier_examples() {
        let c = classify_default(&TestFunction::cobb_douglas(1.0, 1.0).unwrap());
        assert!(c.classes.contains(&Super) && !c.classes.contains(&Sub));
        assert!(c.increasing);

        let c = classify_default(&TestFunction::cobb_douglas(0.5, 0.5).unwrap());
        assert_eq!(c.strongest, Some(SuperSuper));
        assert!(c.concave);

        let c = classify_default(&TestFunction::modular_complement(1.0).unwrap());
        assert!(c.classes.contains(&Sub) && !c.classes.contains(&Super));
        assert!(c.increasing);

        let c = classify_default(&TestFunction::neg_complement_power(2.0, 2.0).unwrap());
        assert_eq!(c.strongest, Some(SubSub));
    }

    #[test]
    fn constant_satisfies_every_class() {
        let c = classify_default(&TestFunction::constant(2.0));
        assert_eq!(c.classes, ModularityClass::ALL.to_vec());
        assert_eq!(c.strongest, Some(SubSub));
    }

    #[test]
    fn cone_combination() {
        let a = TestFunction::cobb_douglas(1.0, 1.0).unwrap();
        let b = TestFunction::cobb_douglas(0.5, 0.5).unwrap();
        let id = TestFunction::cone_combine(vec![a.clone()], vec![1.0]).unwrap();
        assert_eq!(id.eval(0.3, 0.7), a.eval(0.3, 0.7));

        let mix = TestFunction::cone_combine(vec![a.clone(), b.clone()], vec![0.5, 0.5]).unwrap();
        assert_eq!(mix.class(), Some(SuperSuper));
        assert_eq!(classify_default(&mix).strongest, Some(SuperSuper));

        let zero = TestFunction::cone_combine(vec![a.clone(), b], vec![1.0, 0.0]).unwrap();
        assert_eq!(zero.eval(0.3, 0.7), a.eval(0.3, 0.7));

        let m = TestFunction::modular_complement(0.5).unwrap();
        assert!(matches!(
            TestFunction::cone_combine(vec![a.clone(), m], vec![1.0, 1.0]),
            Err(Error::MixedClasses(_, _))
        ));
        assert!(TestFunction::cone_combine(vec![a.clone()], vec![0.0]).is_err());
        assert!(TestFunction::cone_combine(vec![a], vec![-1.0]).is_err());
    }

    #[test]
    fn class_implication() {
        assert!(SubSub.implies(Sub));
        assert!(SuperSuper.implies(Super));
        assert!(!Sub.implies(SubSub));
        assert!(!SubSub.implies(Super));
        let f = TestFunction::neg_complement_power(2.0, 2.0).unwrap();
        assert!(f.belongs_to(Sub) && f.belongs_to(SubSub) && !f.belongs_to(Super));
        assert!(!TestFunction::constant(1.0).belongs_to(Sub));
    }

    #[test]
    fn registry_round_trip() {
        for desc in ["cobb_douglas:0.5,0.25", "modular_complement:1", "neg_complement_power:2,3", "constant:2.5"] {
            let f = TestFunction::parse(desc).unwrap();
            assert_eq!(f.descriptor(), desc);
            assert_eq!(TestFunction::parse(&f.descriptor()).unwrap(), f);
        }
        assert!(matches!(TestFunction::parse("exp:1"), Err(Error::UnknownFunction(_))));
        assert!(matches!(TestFunction::parse("cobb_douglas:1"), Err(Error::UnknownFunction(_))));
        assert!(matches!(TestFunction::parse("cobb_douglas:x,1"), Err(Error::UnknownFunction(_))));
        assert!(matches!(TestFunction::parse("cobb_douglas:2,1"), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn derivatives_are_consistent() {
        let fs = [
            TestFunction::cobb_douglas(0.5, 0.5).unwrap(),
            TestFunction::cobb_douglas(0.05, 1.0).unwrap(),
            TestFunction::modular_complement(0.7).unwrap(),
            TestFunction::neg_complement_power(1.0, 1.0).unwrap(),
            TestFunction::neg_complement_power(2.5, 4.0).unwrap(),
            TestFunction::constant(3.0),
        ];
        for f in &fs {
            assert_eq!(derivative_mismatch(f), None, "{f}");
        }
    }
}
