//! JSON HTTP API over the ranking and statistics engines.
//!
//! Routes:
//!
//! - `POST /api/rank`: one ranking, with the stage-1 closeness vectors
//! - `POST /api/sweep`: A-TOPSIS over a grid of mean weights
//! - `POST /api/stats`: Friedman test and pairwise Wilcoxon tests
//! - `GET /api/health`
//!
//! Handlers keep no state between requests.

use std::net::SocketAddr;

use axum::body::Bytes;
use axum::extract::DefaultBodyLimit;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use rankbench_core::report::{rank_report, sweep_report, RankConfig, RankReport, SweepView};
use rankbench_core::stats::{stats_report, StatsReport, DEFAULT_ALPHA};
use rankbench_core::{
    default_grid, grid_from_range, Axis, CriterionDirection, DecisionMatrixPair, Error,
    LabeledMatrix, Method, NormalizationScheme, WeightPair, DEFAULT_SIGMA_FLOOR,
    DEFAULT_TIE_EPSILON,
};

pub const DEFAULT_PORT: u16 = 8080;
pub const PORT_ENV: &str = "RANKBENCH_PORT";
pub const BODY_LIMIT: usize = 1024 * 1024;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeanWeight {
    pub w_mu: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankRequest {
    pub algorithms: Vec<String>,
    pub benchmarks: Vec<String>,
    pub mu: Vec<Vec<f64>>,
    pub sigma: Vec<Vec<f64>>,
    pub weights: MeanWeight,
    #[serde(default)]
    pub direction: CriterionDirection,
    #[serde(default)]
    pub normalization: NormalizationScheme,
    #[serde(default)]
    pub method: Method,
    #[serde(default)]
    pub sigma_floor: Option<f64>,
    #[serde(default)]
    pub tie_epsilon: Option<f64>,
}

impl RankRequest {
    pub fn config(&self) -> RankConfig {
        RankConfig {
            method: self.method,
            direction: self.direction,
            normalization: self.normalization,
            sigma_floor: self.sigma_floor.unwrap_or(DEFAULT_SIGMA_FLOOR),
            tie_epsilon: self.tie_epsilon.unwrap_or(DEFAULT_TIE_EPSILON),
            ..RankConfig::default()
        }
        .with_mean_weight(self.weights.w_mu)
    }

    fn pair(&self) -> Result<DecisionMatrixPair, ApiError> {
        let mu = matrix(&self.algorithms, &self.benchmarks, &self.mu, "mu")?;
        let sigma = matrix(&self.algorithms, &self.benchmarks, &self.sigma, "sigma")?;
        DecisionMatrixPair::new(mu, sigma).map_err(|e| ApiError::from_core(e, "sigma"))
    }
}

/// Either explicit `w_mu` values or an inclusive range.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Points(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRequest {
    #[serde(flatten)]
    pub rank: RankRequest,
    /// Defaults to `w_mu` = 0.5, 0.6, ..., 1.0.
    #[serde(default)]
    pub grid: Option<GridSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatsRequest {
    pub algorithms: Vec<String>,
    pub benchmarks: Vec<String>,
    pub mu: Vec<Vec<f64>>,
    #[serde(default)]
    pub direction: CriterionDirection,
    #[serde(default)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatsResponse {
    #[serde(flatten)]
    pub report: StatsReport,
    pub significant_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub field: Option<String>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, error: impl Into<String>, field: Option<&str>) -> Self {
        Self {
            status,
            body: ErrorBody {
                error: error.into(),
                field: field.map(str::to_string),
            },
        }
    }

    /// Maps a library error to a status. Malformed input is a 400; values
    /// that parse but make no sense for the method are a 422.
    fn from_core(err: Error, field: &str) -> Self {
        let message = err.to_string();
        match err {
            Error::WeightInvalid(_) => {
                Self::new(StatusCode::UNPROCESSABLE_ENTITY, message, Some("weights"))
            }
            Error::NonPositiveSigmaFloor(_) => Self::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                message,
                Some("sigma_floor"),
            ),
            Error::InvalidTieEpsilon(_) => Self::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                message,
                Some("tie_epsilon"),
            ),
            Error::InvalidAlpha(_) => {
                Self::new(StatusCode::UNPROCESSABLE_ENTITY, message, Some("alpha"))
            }
            Error::TooFewAlgorithms(_) | Error::TooFewBenchmarks(_) => {
                Self::new(StatusCode::UNPROCESSABLE_ENTITY, message, Some("mu"))
            }
            Error::BadGrid(_) => Self::new(StatusCode::BAD_REQUEST, message, Some("grid")),
            Error::DuplicateLabel { axis, .. } | Error::UnknownLabel { axis, .. } => {
                let f = match axis {
                    Axis::Row => "algorithms",
                    Axis::Column => "benchmarks",
                };
                Self::new(StatusCode::BAD_REQUEST, message, Some(f))
            }
            _ => Self::new(StatusCode::BAD_REQUEST, message, Some(field)),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

fn matrix(
    rows: &[String],
    cols: &[String],
    values: &[Vec<f64>],
    field: &str,
) -> Result<LabeledMatrix, ApiError> {
    LabeledMatrix::new(rows.to_vec(), cols.to_vec(), values.to_vec())
        .map_err(|e| ApiError::from_core(e, field))
}

fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    let de = &mut serde_json::Deserializer::from_slice(body);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = path
            .split(['.', '['])
            .next()
            .filter(|s| !s.is_empty() && *s != "?")
            .map(str::to_string);
        ApiError {
            status: StatusCode::BAD_REQUEST,
            body: ErrorBody {
                error: e.into_inner().to_string(),
                field,
            },
        }
    })
}

pub fn rank(req: &RankRequest) -> Result<RankReport, ApiError> {
    let pair = req.pair()?;
    rank_report(&pair, &req.config()).map_err(|e| ApiError::from_core(e, "mu"))
}

pub fn sweep(req: &SweepRequest) -> Result<SweepView, ApiError> {
    let pair = req.rank.pair()?;
    let grid = match &req.grid {
        None => default_grid(),
        Some(GridSpec::Points(points)) => {
            if points.is_empty() {
                return Err(ApiError::new(
                    StatusCode::BAD_REQUEST,
                    "grid is empty",
                    Some("grid"),
                ));
            }
            points
                .iter()
                .map(|&w| WeightPair::from_mean_weight(w))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| {
                    ApiError::new(
                        StatusCode::UNPROCESSABLE_ENTITY,
                        e.to_string(),
                        Some("grid"),
                    )
                })?
        }
        Some(GridSpec::Range { start, stop, step }) => {
            grid_from_range(*start, *stop, *step).map_err(|e| ApiError::from_core(e, "grid"))?
        }
    };
    sweep_report(&pair, &grid, &req.rank.config()).map_err(|e| ApiError::from_core(e, "mu"))
}

pub fn stats(req: &StatsRequest) -> Result<StatsResponse, ApiError> {
    let mu = matrix(&req.algorithms, &req.benchmarks, &req.mu, "mu")?;
    let mut report = stats_report(&mu, req.direction, req.alpha.unwrap_or(DEFAULT_ALPHA))
        .map_err(|e| ApiError::from_core(e, "mu"))?;
    report.sort_by_p();
    Ok(StatsResponse {
        significant_count: report.significant().count(),
        report,
    })
}

async fn rank_handler(body: Bytes) -> Result<Json<RankReport>, ApiError> {
    rank(&parse(&body)?).map(Json)
}

async fn sweep_handler(body: Bytes) -> Result<Json<SweepView>, ApiError> {
    sweep(&parse(&body)?).map(Json)
}

async fn stats_handler(body: Bytes) -> Result<Json<StatsResponse>, ApiError> {
    stats(&parse(&body)?).map(Json)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
}

async fn health() -> Json<Health> {
    Json(Health {
        status: "ok".into(),
        version: env!("CARGO_PKG_VERSION").into(),
    })
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "no such route", None)
}

pub fn router() -> Router {
    Router::new()
        .route("/api/rank", post(rank_handler))
        .route("/api/sweep", post(sweep_handler))
        .route("/api/stats", post(stats_handler))
        .route("/api/health", get(health))
        .fallback(not_found)
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
        .layer(CorsLayer::permissive())
}

/// `explicit` if given, else `RANKBENCH_PORT`, else 8080.
pub fn resolve_port(explicit: Option<u16>) -> Result<u16, String> {
    if let Some(p) = explicit {
        return Ok(p);
    }
    match std::env::var(PORT_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{PORT_ENV}={v:?} is not a valid port")),
        Err(_) => Ok(DEFAULT_PORT),
    }
}

pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router()).await
}
