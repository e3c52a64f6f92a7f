//! Cores of function graphs.
//!
//! A unary map `p` is an endomorphism of every graph `f` exactly when
//! `p(f(x)) = f(p(x))` for all `x`. Restricting the template to the image
//! of a smallest-range idempotent endomorphism gives the core; the image
//! of `graph f` under `p` is the graph of `f` restricted to `p(D)`.

use serde::Serialize;

use crate::model::{CoBooleanFunction, Element, Template};

/// An idempotent endomorphism of the template together with the renaming
/// of its image onto `0..m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Retraction {
    map: Vec<Element>,
    image: Vec<Element>,
}

impl Retraction {
    fn new(map: Vec<Element>) -> Self {
        let mut image = map.clone();
        image.sort_unstable();
        image.dedup();
        Self { map, image }
    }

    pub fn map(&self) -> &[Element] {
        &self.map
    }

    pub fn apply(&self, d: Element) -> Element {
        self.map[d]
    }

    /// Image elements in ascending order; core element `i` is `image()[i]`.
    pub fn image(&self) -> &[Element] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &d)| i == d)
    }

    /// `true` for a one-element image. This happens exactly when 0 and 1
    /// are identified: `p(0) = p(1) = c` forces `f(c) = c` for every `f`,
    /// so the constant map to `c` is an endomorphism.
    pub fn is_degenerate(&self) -> bool {
        self.image.len() == 1
    }

    /// Core name of an original element, if it lies in the image.
    pub fn rename(&self, d: Element) -> Option<Element> {
        self.image.binary_search(&d).ok()
    }

    /// Original element behind a core element.
    pub fn original(&self, e: Element) -> Element {
        self.image[e]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Core {
    pub template: Template,
    pub retraction: Retraction,
}

/// All equations `p(f(x)) = f(p(x))` that become fully determined once `x`
/// is assigned.
fn consistent(tmpl: &Template, map: &[Option<Element>], x: Element) -> bool {
    let px = map[x].expect("x assigned");
    for f in tmpl.functions() {
        if let Some(pfx) = map[f.apply(x)] {
            if pfx != f.apply(px) {
                return false;
            }
        }
        // equations whose right-hand side f(z) is x itself
        for (z, pz) in map.iter().enumerate() {
            if let Some(pz) = *pz {
                if z != x && f.apply(z) == x && px != f.apply(pz) {
                    return false;
                }
            }
        }
    }
    true
}

struct Search<'a> {
    tmpl: &'a Template,
    map: Vec<Option<Element>>,
    hits: Vec<usize>,
    distinct: usize,
    best: Option<(usize, Vec<Element>)>,
}

impl Search<'_> {
    fn run(&mut self, x: Element) {
        let n = self.tmpl.size();
        if x == n {
            if self.best.as_ref().is_none_or(|(s, _)| self.distinct < *s) {
                let map = self.map.iter().map(|v| v.expect("total")).collect();
                self.best = Some((self.distinct, map));
            }
            return;
        }
        for y in 0..n {
            // idempotence: targets are fixed points
            if y < x && self.map[y] != Some(y) {
                continue;
            }
            if self.hits[x] > 0 && y != x {
                continue;
            }
            let grows = usize::from(self.hits[y] == 0);
            if let Some((s, _)) = &self.best {
                if self.distinct + grows >= *s {
                    continue;
                }
            }
            self.map[x] = Some(y);
            if consistent(self.tmpl, &self.map, x) {
                self.hits[y] += 1;
                self.distinct += grows;
                self.run(x + 1);
                self.distinct -= grows;
                self.hits[y] -= 1;
            }
            self.map[x] = None;
        }
    }
}

/// Finds the lexicographically least idempotent endomorphism of smallest
/// range by depth-first search in lexicographic order with bound pruning.
fn smallest_retraction(tmpl: &Template) -> Vec<Element> {
    let n = tmpl.size();
    let mut search = Search {
        tmpl,
        map: vec![None; n],
        hits: vec![0; n],
        distinct: 0,
        best: None,
    };
    search.run(0);
    search
        .best
        .expect("the identity is always an endomorphism")
        .1
}

/// Computes the core of `tmpl` and the retraction onto it.
///
/// Core functions are the template functions restricted to the image,
/// with elements renamed in ascending order. For a non-degenerate core the
/// image contains 0 and 1, so they keep their names.
pub fn compute_core(tmpl: &Template) -> Core {
    let retraction = Retraction::new(smallest_retraction(tmpl));
    let functions = tmpl
        .functions()
        .iter()
        .map(|f| {
            let table = retraction
                .image()
                .iter()
                .map(|&d| {
                    let v = retraction
                        .rename(f.apply(d))
                        .expect("endomorphism images are closed under f");
                    v as u8
                })
                .collect();
            CoBooleanFunction::new(f.name(), table).expect("restriction stays co-Boolean")
        })
        .collect();
    Core {
        template: Template::core_unchecked(retraction.image().len(), functions),
        retraction,
    }
}
