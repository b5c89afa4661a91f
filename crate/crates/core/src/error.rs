use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("characteristic {0} is not an odd prime")]
    BadCharacteristic(u32),
    #[error("q = {0} is below the supported minimum 7")]
    FieldTooSmall(u64),
    #[error("q = {0} is too large for table arithmetic")]
    FieldTooLarge(u64),
    #[error("0 has no cube class")]
    ZeroCube,
    #[error("element is not in the subfield F_q")]
    NotInSubfield,
    #[error("vectors do not span a unitary F_q-form")]
    NotUnitaryForm,
    #[error("points coincide")]
    EqualPoints,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("pole is isotropic")]
    IsotropicPole,
    #[error("operation needs the {0} Gram matrix")]
    WrongGram(&'static str),
    #[error("orbit grew past the predicted size {0}")]
    OrbitOverflow(usize),
    #[error("orbit closed at {found} subplanes, expected {expected}")]
    OrbitSize { found: usize, expected: usize },
    #[error("stabilizer closure has order {found}, expected {expected}")]
    StabilizerOrder { found: usize, expected: usize },
    #[error("subplane is not in the enumerated orbit")]
    NotInOrbit,
    #[error("the two subplanes are equal")]
    SameSubplane,
    #[error("point is not an isotropic point of the subplane")]
    BadTransportPoint,
    #[error("unclassifiable stabilizer: order {order}, {involutions} involutions, normalizer order {normalizer}")]
    Unclassifiable {
        order: usize,
        involutions: usize,
        normalizer: usize,
    },
    #[error("element order exceeds the cap {0}")]
    OrderCap(usize),
    #[error("hash collision between distinct subplanes")]
    KeyCollision,
    #[error("constructive scan exhausted {0} candidates without a witness")]
    FinderExhausted(usize),
    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),
    #[error("invalid parameters: {0}")]
    BadParams(&'static str),
    #[error("polynomial is not a cubic")]
    NotCubic,
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} does not divide 2m")]
    BadDegree(u32),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
