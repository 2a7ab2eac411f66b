use std::fmt;

/// Failure category; doubles as the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Config = 2,
    Data = 3,
    Numerical = 4,
    Io = 5,
}

impl Category {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Config => "config error",
            Category::Data => "data error",
            Category::Numerical => "numerical failure",
            Category::Io => "i/o error",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub category: Category,
    pub message: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self { category: Category::Config, message: msg.into() }
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Self { category: Category::Data, message: msg.into() }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Self { category: Category::Io, message: format!("{}: {e}", path.display()) }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.category.name(), self.message)
    }
}

impl std::error::Error for CliError {}

impl From<seqnystrom::Error> for CliError {
    fn from(e: seqnystrom::Error) -> Self {
        use seqnystrom::Error as E;
        let category = match &e {
            E::InvalidArgument(_) | E::UnsupportedKernel(_) => Category::Config,
            E::Data { .. } | E::DegenerateInput(_) => Category::Data,
            E::Numerical(_) => Category::Numerical,
            E::Io(_) => Category::Io,
        };
        Self { category, message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
