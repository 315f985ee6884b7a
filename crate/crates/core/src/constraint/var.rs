use std::fmt;
use std::sync::Arc;

/// Role a variable plays in a constraint context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    Clock,
    Parameter,
    Auxiliary,
}

impl VarKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VarKind::Clock => "clock",
            VarKind::Parameter => "parameter",
            VarKind::Auxiliary => "auxiliary",
        }
    }

    pub fn from_str_opt(s: &str) -> Option<Self> {
        match s {
            "clock" => Some(VarKind::Clock),
            "parameter" => Some(VarKind::Parameter),
            "auxiliary" => Some(VarKind::Auxiliary),
            _ => None,
        }
    }
}

/// A named variable. Cloning is cheap (shared name).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    name: Arc<str>,
    kind: VarKind,
}

impl Var {
    pub fn new(name: impl AsRef<str>, kind: VarKind) -> Self {
        Var {
            name: Arc::from(name.as_ref()),
            kind,
        }
    }

    pub fn clock(name: impl AsRef<str>) -> Self {
        Var::new(name, VarKind::Clock)
    }

    pub fn param(name: impl AsRef<str>) -> Self {
        Var::new(name, VarKind::Parameter)
    }

    pub fn aux(name: impl AsRef<str>) -> Self {
        Var::new(name, VarKind::Auxiliary)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn is_clock(&self) -> bool {
        self.kind == VarKind::Clock
    }

    pub fn is_param(&self) -> bool {
        self.kind == VarKind::Parameter
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}
