use std::borrow::Borrow;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

/// Interned-ish identifier. Cheap to clone, compares by content.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(s: &str) -> Self {
        Symbol(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_upper(&self) -> bool {
        self.0
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_uppercase() || c == '_')
    }
}

impl Deref for Symbol {
    type Target = str;
    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

impl From<&String> for Symbol {
    fn from(s: &String) -> Self {
        Symbol::new(s)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Least `base<k>`, k >= 1, for which `taken` is false.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> Symbol {
    let mut k = 1u32;
    loop {
        let candidate = format!("{base}{k}");
        if !taken(&candidate) {
            return Symbol::from(candidate);
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_name_picks_least_free_suffix() {
        let taken = ["y", "y1", "y3"];
        assert_eq!(&*fresh_name("y", |s| taken.contains(&s)), "y2");
        assert_eq!(&*fresh_name("x", |_| false), "x1");
    }

    #[test]
    fn uppercase_detection() {
        assert!(Symbol::from("Xs").is_upper());
        assert!(!Symbol::from("xs").is_upper());
        assert!(!Symbol::from("1").is_upper());
    }
}
