//! Additive and subtree-additive tree properties.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::toll::{ArithmeticMode, PolynomialToll};
use crate::tree::{PlaneTree, SubtreeScan, TreeStats, TreeView};

/// A property value, exact when the inputs allow it.
#[derive(Clone, Debug, PartialEq)]
pub enum PropertyValue {
    Exact(BigRational),
    Float(f64),
}

impl PropertyValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            PropertyValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            PropertyValue::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            PropertyValue::Exact(r) => Some(r),
            PropertyValue::Float(_) => None,
        }
    }
}

impl fmt::Display for PropertyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyValue::Exact(r) => write!(f, "{r}"),
            PropertyValue::Float(x) => write!(f, "{x}"),
        }
    }
}

type TollFn<V> = dyn Fn(TreeView<'_>) -> V + Send + Sync;

/// `P^(f,c)`: `P(T1 ⋉ T2) = P(T1) + P(T2) + f(T2)` and `P(single vertex) = c`.
pub struct AdditiveProperty<V> {
    toll: Box<TollFn<V>>,
    constant: V,
}

impl<V: Clone + Zero + Add<Output = V>> AdditiveProperty<V> {
    pub fn new(toll: impl Fn(TreeView<'_>) -> V + Send + Sync + 'static, constant: V) -> Self {
        AdditiveProperty { toll: Box::new(toll), constant }
    }

    pub fn constant(&self) -> &V {
        &self.constant
    }

    pub fn toll(&self, t: TreeView<'_>) -> V {
        (self.toll)(t)
    }

    /// Unrolled form: `c` for every vertex plus `f(T_v)` for every non-root vertex.
    pub fn eval(&self, t: TreeView<'_>) -> V {
        let steps = t.steps();
        let mut open = Vec::with_capacity(steps.len() / 2);
        let mut acc = self.constant.clone();
        for (i, &s) in steps.iter().enumerate() {
            if s {
                open.push(i);
            } else {
                let start = open.pop().expect("balanced word");
                let sub = TreeView::new_unchecked(&steps[start + 1..i]);
                acc = acc + (self.toll)(sub) + self.constant.clone();
            }
        }
        acc
    }
}

impl<V: Clone + Zero + One + Add<Output = V>> AdditiveProperty<V> {
    /// `P^e`, toll `(1, 0)`.
    pub fn edges() -> Self {
        Self::new(|_| V::one(), V::zero())
    }

    /// `P^v`, toll `(0, 1)`.
    pub fn vertices() -> Self {
        Self::new(|_| V::zero(), V::one())
    }

    /// `P^d0`: the toll is 1 exactly on the single-vertex tree.
    pub fn leaves() -> Self {
        Self::new(|t| if t.is_single_vertex() { V::one() } else { V::zero() }, V::zero())
    }

    /// `P^d1`: the toll is 1 exactly on trees of root degree 1.
    pub fn internal_nodes() -> Self {
        Self::new(|t| if t.root_degree() == 1 { V::one() } else { V::zero() }, V::zero())
    }
}

pub fn eval_additive<V: Clone + Zero + Add<Output = V>>(p: &AdditiveProperty<V>, t: &PlaneTree) -> V {
    p.eval(t.view())
}

/// Sum of vertex depths.
pub fn path_length(t: &PlaneTree) -> u64 {
    let mut total = 0u64;
    SubtreeScan::new().scan(t.view(), |r| total += (r.standard.edges + 1) as u64);
    total
}

/// Sum of distances over unordered vertex pairs, via `Σ_v |T_v|·(|T| − |T_v|)`.
pub fn wiener_index(t: &PlaneTree) -> u64 {
    let total_vertices = t.vertices() as u64;
    let mut total = 0u64;
    SubtreeScan::new().scan(t.view(), |r| {
        let v = r.vertices() as u64;
        total += v * (total_vertices - v);
    });
    total
}

/// Sum of the depths of all leaves.
pub fn leaf_root_distance(t: &PlaneTree) -> u64 {
    let mut total = 0u64;
    SubtreeScan::new().scan(t.view(), |r| total += r.extended.leaves as u64);
    total
}

/// Sum of the depths of all internal nodes.
pub fn internal_root_distance(t: &PlaneTree) -> u64 {
    let mut total = 0u64;
    SubtreeScan::new().scan(t.view(), |r| total += r.extended.internal as u64);
    total
}

/// `P^f(T) = Σ_{v non-root} f(T_v, T)` with extended subtree statistics.
/// Returns 0 on the single-vertex tree (empty sum).
pub fn eval_polynomial_toll(f: &PolynomialToll, t: &PlaneTree) -> PropertyValue {
    let mut ev = PropertyEvaluator::new();
    match f.mode() {
        ArithmeticMode::Exact => PropertyValue::Exact(ev.toll_exact(f, t.view())),
        ArithmeticMode::Float => PropertyValue::Float(ev.toll_f64(f, t.view())),
    }
}

/// The named properties plus arbitrary polynomial tolls.
#[derive(Clone, Debug, PartialEq)]
pub enum Property {
    Edges,
    Vertices,
    Leaves,
    Internal,
    RootDegree,
    PathLength,
    Wiener,
    LeafRoot,
    InternalRoot,
    Toll(PolynomialToll),
}

impl Property {
    pub fn name(&self) -> String {
        match self {
            Property::Edges => "e".into(),
            Property::Vertices => "v".into(),
            Property::Leaves => "d0".into(),
            Property::Internal => "d1".into(),
            Property::RootDegree => "r".into(),
            Property::PathLength => "pl".into(),
            Property::Wiener => "wi".into(),
            Property::LeafRoot => "lr".into(),
            Property::InternalRoot => "ir".into(),
            Property::Toll(f) => format!("toll[{f}]"),
        }
    }

    /// The toll whose `P^f` equals this property, where one exists.
    pub fn as_toll(&self) -> Option<PolynomialToll> {
        let src = match self {
            Property::Edges => "1",
            Property::PathLength => "t+1",
            Property::Wiener => "(t+1)*(n-t)",
            Property::LeafRoot => "l0",
            Property::InternalRoot => "l1",
            Property::Toll(f) => return Some(f.clone()),
            _ => return None,
        };
        Some(PolynomialToll::parse(src).expect("built-in toll"))
    }

    fn needs_subtrees(&self) -> bool {
        matches!(self, Property::Toll(_))
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    /// Short ids (`e v d0 d1 r pl wi lr ir`) or a toll expression.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "e" | "edges" => Property::Edges,
            "v" | "vertices" => Property::Vertices,
            "d0" | "leaves" => Property::Leaves,
            "d1" | "internal" => Property::Internal,
            "r" | "root" => Property::RootDegree,
            "pl" | "path-length" => Property::PathLength,
            "wi" | "wiener" => Property::Wiener,
            "lr" => Property::LeafRoot,
            "ir" => Property::InternalRoot,
            _ => {
                let expr = s.strip_prefix("toll:").unwrap_or(s);
                let f = PolynomialToll::parse(expr)?;
                if f.is_zero() {
                    return Err(Error::ZeroToll);
                }
                Property::Toll(f)
            }
        })
    }
}

#[derive(Default, Clone, Copy)]
struct Sums {
    depth: u64,
    wiener: u64,
    leaf_depth: u64,
    internal_depth: u64,
}

/// Evaluates several properties with one scan and reusable scratch space.
#[derive(Default)]
pub struct PropertyEvaluator {
    scan: SubtreeScan,
    extended: Vec<TreeStats>,
}

impl PropertyEvaluator {
    pub fn new() -> Self {
        Self::default()
    }

    fn run(&mut self, t: TreeView<'_>, keep_subtrees: bool) -> (TreeStats, Sums) {
        let total_vertices = (t.edges() + 1) as u64;
        let mut sums = Sums::default();
        self.extended.clear();
        let extended = &mut self.extended;
        let whole = self.scan.scan(t, |r| {
            let v = r.vertices() as u64;
            sums.depth += v;
            sums.wiener += v * (total_vertices - v);
            sums.leaf_depth += r.extended.leaves as u64;
            sums.internal_depth += r.extended.internal as u64;
            if keep_subtrees {
                extended.push(r.extended);
            }
        });
        (whole, sums)
    }

    fn builtin(p: &Property, whole: &TreeStats, sums: &Sums) -> Option<u64> {
        Some(match p {
            Property::Edges => whole.edges as u64,
            Property::Vertices => whole.edges as u64 + 1,
            Property::Leaves => whole.leaves as u64,
            Property::Internal => whole.internal as u64,
            Property::RootDegree => whole.root_degree as u64,
            Property::PathLength => sums.depth,
            Property::Wiener => sums.wiener,
            Property::LeafRoot => sums.leaf_depth,
            Property::InternalRoot => sums.internal_depth,
            Property::Toll(_) => return None,
        })
    }

    /// Writes one `f64` per property into `out` and returns the tree stats.
    pub fn eval_f64(&mut self, t: TreeView<'_>, props: &[Property], out: &mut Vec<f64>) -> TreeStats {
        let keep = props.iter().any(Property::needs_subtrees);
        let (whole, sums) = self.run(t, keep);
        out.clear();
        for p in props {
            let v = match p {
                Property::Toll(f) => f.eval_f64_on(&self.extended, &whole),
                _ => Self::builtin(p, &whole, &sums).expect("built-in") as f64,
            };
            out.push(v);
        }
        whole
    }

    /// Exact value of one property together with the tree stats.
    pub fn eval_exact(&mut self, t: TreeView<'_>, p: &Property) -> (TreeStats, BigRational) {
        let (whole, sums) = self.run(t, p.needs_subtrees());
        let v = match p {
            Property::Toll(f) => f.eval_exact_on(&self.extended, &whole),
            _ => BigRational::from_integer(Self::builtin(p, &whole, &sums).expect("built-in").into()),
        };
        (whole, v)
    }

    pub fn toll_exact(&mut self, f: &PolynomialToll, t: TreeView<'_>) -> BigRational {
        let (whole, _) = self.run(t, true);
        f.eval_exact_on(&self.extended, &whole)
    }

    pub fn toll_f64(&mut self, f: &PolynomialToll, t: TreeView<'_>) -> f64 {
        let (whole, _) = self.run(t, true);
        f.eval_f64_on(&self.extended, &whole)
    }
}
