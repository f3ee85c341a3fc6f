use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::PolyError;

/// Role of a variable inside a transformed system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Block {
    Decision,
    Objective,
    Slack,
    Gamma,
    Nu,
    Lambda,
    Mu,
    Beta,
    Omega,
    Lambda0,
}

impl Block {
    /// Name prefix used when variables of this block are generated.
    pub fn prefix(self) -> &'static str {
        match self {
            Block::Decision => "x",
            Block::Objective => "y",
            Block::Slack => "w",
            Block::Gamma => "gamma",
            Block::Nu => "nu",
            Block::Lambda => "lambda",
            Block::Mu => "mu",
            Block::Beta => "beta",
            Block::Omega => "omega",
            Block::Lambda0 => "lambda0",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarDesc {
    pub name: String,
    pub block: Block,
    /// Index within the block, 1-based to match the generated names.
    pub index: usize,
}

/// Ordered variable list. Position 0 is the greatest variable under lex.
#[derive(Clone)]
pub struct VarContext {
    vars: Vec<VarDesc>,
    by_name: HashMap<String, usize>,
}

impl VarContext {
    pub fn new(vars: Vec<VarDesc>) -> Result<Arc<Self>, PolyError> {
        let mut by_name = HashMap::with_capacity(vars.len());
        for (i, v) in vars.iter().enumerate() {
            if by_name.insert(v.name.clone(), i).is_some() {
                return Err(PolyError::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(Arc::new(VarContext { vars, by_name }))
    }

    /// Context `x1 ≻ x2 ≻ … ≻ xn` of decision variables.
    pub fn decision(n: usize) -> Arc<Self> {
        let mut b = ContextBuilder::new();
        b.push_block(Block::Decision, n);
        b.build()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[VarDesc] {
        &self.vars
    }

    pub fn var(&self, pos: usize) -> &VarDesc {
        &self.vars[pos]
    }

    pub fn name(&self, pos: usize) -> &str {
        &self.vars[pos].name
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    /// Positions of all variables of `block`, in context order.
    pub fn block_positions(&self, block: Block) -> Vec<usize> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.block == block)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn count(&self, block: Block) -> usize {
        self.vars.iter().filter(|v| v.block == block).count()
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || self.vars == other.vars
    }
}

impl PartialEq for VarContext {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl Eq for VarContext {}

impl fmt::Debug for VarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.vars.iter().map(|v| v.name.as_str()).collect();
        write!(f, "VarContext{names:?}")
    }
}

/// Builds a context block by block, greatest block first.
#[derive(Default)]
pub struct ContextBuilder {
    vars: Vec<VarDesc>,
}

impl ContextBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_block(&mut self, block: Block, count: usize) -> &mut Self {
        for i in 1..=count {
            self.vars.push(VarDesc {
                name: format!("{}{}", block.prefix(), i),
                block,
                index: i,
            });
        }
        self
    }

    /// Single-variable blocks (gamma, lambda0) are named without an index.
    pub fn push_single(&mut self, block: Block) -> &mut Self {
        self.vars.push(VarDesc {
            name: block.prefix().to_string(),
            block,
            index: 1,
        });
        self
    }

    pub fn build(&self) -> Arc<VarContext> {
        VarContext::new(self.vars.clone()).expect("generated names are unique")
    }
}
