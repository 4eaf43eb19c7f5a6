use fwlab_core::C64;

/// Spin framework named in a `teleport` query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameworkName {
    Z,
    X,
}

impl FrameworkName {
    pub fn as_str(&self) -> &'static str {
        match self {
            FrameworkName::Z => "Z",
            FrameworkName::X => "X",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Declaration {
    Space {
        name: String,
        dim: usize,
    },
    Op {
        name: String,
        rows: Vec<Vec<C64>>,
    },
    State {
        name: String,
        amplitudes: Vec<C64>,
    },
    PdiFrom {
        name: String,
        op: String,
    },
    PdiBlocks {
        name: String,
        blocks: Vec<String>,
    },
    /// Each step is a (unitary, pdi) pair.
    Family {
        name: String,
        init: String,
        steps: Vec<(String, String)>,
    },
    Channel {
        name: String,
        kraus: Vec<String>,
    },
}

impl Declaration {
    pub fn name(&self) -> &str {
        match self {
            Declaration::Space { name, .. }
            | Declaration::Op { name, .. }
            | Declaration::State { name, .. }
            | Declaration::PdiFrom { name, .. }
            | Declaration::PdiBlocks { name, .. }
            | Declaration::Family { name, .. }
            | Declaration::Channel { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Query {
    Prob {
        state: String,
        pdi: String,
    },
    EventProb {
        state: String,
        pdi: String,
        indices: Vec<usize>,
    },
    Compat {
        left: String,
        right: String,
    },
    Refine {
        left: String,
        right: String,
    },
    Conj {
        left: String,
        right: String,
    },
    Consistent {
        family: String,
    },
    HistProb {
        family: String,
    },
    ChannelCheck {
        channel: String,
    },
    /// Two frameworks request the combined description.
    Teleport {
        state: String,
        frameworks: Vec<FrameworkName>,
    },
}

impl Query {
    pub fn keyword(&self) -> &'static str {
        match self {
            Query::Prob { .. } => "prob",
            Query::EventProb { .. } => "eventprob",
            Query::Compat { .. } => "compat",
            Query::Refine { .. } => "refine",
            Query::Conj { .. } => "conj",
            Query::Consistent { .. } => "consistent",
            Query::HistProb { .. } => "histprob",
            Query::ChannelCheck { .. } => "channelcheck",
            Query::Teleport { .. } => "teleport",
        }
    }

    /// Names the query refers to, in source order.
    pub fn inputs(&self) -> Vec<String> {
        match self {
            Query::Prob { state, pdi } | Query::EventProb { state, pdi, .. } => {
                vec![state.clone(), pdi.clone()]
            }
            Query::Compat { left, right }
            | Query::Refine { left, right }
            | Query::Conj { left, right } => vec![left.clone(), right.clone()],
            Query::Consistent { family } | Query::HistProb { family } => vec![family.clone()],
            Query::ChannelCheck { channel } => vec![channel.clone()],
            Query::Teleport { state, frameworks } => std::iter::once(state.clone())
                .chain(frameworks.iter().map(|f| f.as_str().to_string()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Declaration(Declaration),
    Query(Query),
}

/// A statement with the position of its anchor token: the declared name for
/// declarations, the keyword for queries. Equality ignores the position.
#[derive(Debug, Clone)]
pub struct Item {
    pub line: usize,
    pub column: usize,
    pub statement: Statement,
}

impl PartialEq for Item {
    fn eq(&self, other: &Self) -> bool {
        self.statement == other.statement
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioAst {
    pub items: Vec<Item>,
}

impl ScenarioAst {
    pub fn declarations(&self) -> impl Iterator<Item = &Declaration> {
        self.items.iter().filter_map(|i| match &i.statement {
            Statement::Declaration(d) => Some(d),
            Statement::Query(_) => None,
        })
    }

    pub fn queries(&self) -> impl Iterator<Item = &Query> {
        self.items.iter().filter_map(|i| match &i.statement {
            Statement::Query(q) => Some(q),
            Statement::Declaration(_) => None,
        })
    }
}
