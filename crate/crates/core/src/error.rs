use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis columns are linearly dependent")]
    DegeneratePlane,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("column `{0}` has zero spread")]
    DegenerateColumn(String),
    #[error("projected data has zero spread in a coordinate")]
    DegenerateSpread,
    #[error("all points are collinear")]
    CollinearInput,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown index `{0}`")]
    UnknownIndex(String),
    #[error("TIC calibration required for n = {0}")]
    CalibrationRequired(usize),
    #[error("index evaluation failed: {0}")]
    IndexEvaluation(String),
    #[error("index value at the target plane is below the squint threshold")]
    NoStructureAtTarget,
    #[error("smoothed indexes are evaluated on frames, not on projected data")]
    RequiresFrame,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
