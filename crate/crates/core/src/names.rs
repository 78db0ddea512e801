//! Structured generator names for derived complexes.

/// Wraps a name in parentheses when it is itself a compound name.
fn atom(name: &str) -> std::borrow::Cow<'_, str> {
    if name.contains(['⊗', ' ', '|', '↦']) {
        format!("({name})").into()
    } else {
        name.into()
    }
}

pub(crate) fn tensor(a: &str, b: &str) -> String {
    format!("{}⊗{}", atom(a), atom(b))
}

pub(crate) fn elementary_map(from: &str, to: &str) -> String {
    format!("{}↦{}", atom(from), atom(to))
}

pub(crate) fn pair(a: &str, b: &str) -> String {
    format!("({a},{b})")
}
