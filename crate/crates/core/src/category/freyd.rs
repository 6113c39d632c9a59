use serde::Serialize;

use super::{arr_category, limits_to, validate_category, CategoryError, FinCategory, Functor};

/// Largest category [`freyd_check`] accepts.
pub const FREYD_MAX_MORPHISMS: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum FreydVerdict {
    Preorder,
    /// Two distinct parallel arrows, and an `Arr(C)`-indexed family with no
    /// product: `diagram[i]` is `(arrow of C, object it is sent to)`.
    NotPreorderMissingProduct { parallel: [String; 2], diagram: Vec<(String, String)> },
    /// Not a preorder although every `Arr(C)`-indexed family has a product.
    TheoremViolation { parallel: [String; 2] },
}

impl FreydVerdict {
    pub fn is_violation(&self) -> bool {
        matches!(self, FreydVerdict::TheoremViolation { .. })
    }
}

/// Decides whether `c` is a preorder and, if not, searches the families
/// indexed by `Arr(C)` for one without a product. The constant family at the
/// codomain of a parallel pair is tried first; every family is tried before
/// a theorem violation is reported.
pub fn freyd_check(c: &FinCategory) -> Result<FreydVerdict, CategoryError> {
    if c.num_morphisms() > FREYD_MAX_MORPHISMS {
        return Err(CategoryError::FeasibilityCap {
            what: "category",
            size: c.num_morphisms(),
            cap: FREYD_MAX_MORPHISMS,
        });
    }
    if !validate_category(c).is_empty() {
        return Err(CategoryError::Invalid("category"));
    }
    let Some((f, g)) = parallel_pair(c) else { return Ok(FreydVerdict::Preorder) };
    let parallel = [c.morphism_name(f).to_string(), c.morphism_name(g).to_string()];
    let arr = arr_category(c);
    let k = arr.num_objects();
    let n = c.num_objects();
    let mut families: Vec<Vec<usize>> = vec![vec![c.cod(f); k]];
    families.extend((0..n.pow(k as u32)).map(|mut code| {
        (0..k)
            .map(|_| {
                let v = code % n;
                code /= n;
                v
            })
            .collect()
    }));
    for images in families {
        let diagram = Functor::family(&arr, c, &images)?;
        if limits_to(&diagram).is_empty() {
            let diagram = (0..k)
                .map(|i| (arr.object_name(i).to_string(), c.object_name(images[i]).to_string()))
                .collect();
            return Ok(FreydVerdict::NotPreorderMissingProduct { parallel, diagram });
        }
    }
    Ok(FreydVerdict::TheoremViolation { parallel })
}

fn parallel_pair(c: &FinCategory) -> Option<(usize, usize)> {
    (0..c.num_objects())
        .flat_map(|a| (0..c.num_objects()).map(move |b| (a, b)))
        .find_map(|(a, b)| match c.hom(a, b) {
            [f, g, ..] => Some((*f, *g)),
            _ => None,
        })
}
