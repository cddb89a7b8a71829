use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    ZeroExtensionDegree,
    #[error("modulus must be monic of degree {expected} with coefficients below p")]
    MalformedModulus { expected: u32 },
    #[error("modulus is reducible over GF({p})")]
    ReducibleModulus { p: u32 },
    #[error("field of order {p}^{n} exceeds the table limit {limit}")]
    FieldTooLarge { p: u32, n: u32, limit: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("numerator and denominator are both zero")]
    ZeroPair,
    #[error("duplicate abscissa {0} in interpolation points")]
    DuplicateAbscissa(u32),
    #[error("element {0} appears more than once")]
    DuplicateElement(u32),
    #[error("too many points: {points} exceeds field order {q}")]
    TooManyPoints { points: usize, q: u64 },
    #[error("Mobius transformation has zero determinant")]
    SingularMobius,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("G0 must be monic and either constant or irreducible")]
    ReducibleG0,
    #[error("{what}: {detail}")]
    OutOfRange { what: &'static str, detail: String },
    #[error(
        "exhaustive run needs {required} map evaluations, above the budget of {budget}; \
         raise the budget (FQDYN_BUDGET) or use the sampled mode"
    )]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("internal inconsistency: {cycles} cycles but {components} components")]
    CycleComponentMismatch { cycles: usize, components: usize },
    #[error("worker pool: {0}")]
    Pool(String),
}

impl Error {
    pub(crate) fn out_of_range(what: &'static str, detail: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            detail: detail.into(),
        }
    }
}
