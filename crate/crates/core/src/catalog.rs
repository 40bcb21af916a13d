/// Built-in potentials, listed by `dirac-weyl catalog`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub expression: &'static str,
    pub note: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "const",
        expression: "1",
        note: "flat well, strictly positive",
    },
    CatalogEntry {
        name: "well",
        expression: "1 - x^2",
        note: "harmonic well, turning points at x = ±1",
    },
    CatalogEntry {
        name: "quartic",
        expression: "1 - x^4",
        note: "flat-bottomed well, turning points at x = ±1",
    },
    CatalogEntry {
        name: "gaussian",
        expression: "exp(-x^2)",
        note: "positive everywhere, decays at infinity",
    },
    CatalogEntry {
        name: "double_well",
        expression: "1 - (x^2 - 1)^2",
        note: "two wells at x = ±1 separated by a barrier at the origin",
    },
];

pub fn lookup(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}
