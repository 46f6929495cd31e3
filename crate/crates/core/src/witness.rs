use serde::Serialize;

/// Concrete evidence attached to a negative verdict.
///
/// Simplices are recorded in face-ref syntax (`"s[1,0] e"`), so a witness can
/// be parsed back against the object it came from and re-checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A horn `Λ^dim_missing → X` without a filler. `faces[i]` is the image of
    /// the i-th facet, `"-"` at the missing position. `over` names the
    /// simplex of the base when the horn belongs to a lifting square.
    Horn {
        dim: usize,
        missing: usize,
        faces: Vec<String>,
        over: Option<String>,
    },
    /// A sphere `∂Δ^dim → X` outside the image of the relevant comparison map.
    Sphere {
        dim: usize,
        faces: Vec<String>,
        over: Option<String>,
        basepoint: Option<String>,
    },
    /// A computed invariant that differs between two sides.
    Invariant {
        name: String,
        left: String,
        right: String,
    },
    /// A lifting square without a diagonal.
    Square {
        generator: String,
        top: Vec<String>,
        bottom: Vec<String>,
    },
    /// The witness was found in one section of a presheaf.
    Section { object: String, inner: Box<Witness> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Refuted(Witness),
    Unknown(String),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Refuted(w) => Some(w),
            _ => None,
        }
    }

    /// Tags a refutation with the section it came from.
    pub fn in_section(self, object: &str) -> Verdict {
        match self {
            Verdict::Refuted(w) => Verdict::Refuted(Witness::Section {
                object: object.to_string(),
                inner: Box::new(w),
            }),
            Verdict::Unknown(why) => Verdict::Unknown(format!("{object}: {why}")),
            v => v,
        }
    }
}

/// Result of a fibrancy-style check up to a dimension bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KanCertificate {
    pub subject: String,
    pub checked_dim: usize,
    pub verdict: Verdict,
}

impl KanCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict.is_certified()
    }
}
