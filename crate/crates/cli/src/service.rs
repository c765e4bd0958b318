//! HTTP facade around `segment_at` for the interactive viewer.

use std::net::{Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::CorsLayer;
use uscut_core::{segment_at, Error as CoreError, GrayImage, Point, TemplateConfig};

/// Upper bound on graph size accepted from a request.
pub const MAX_REQUEST_NODES: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub port: u16,
    pub image_path: PathBuf,
    /// Overrides the spacing of the loaded image when set.
    pub spacing: Option<f64>,
    pub template: TemplateConfig,
}

pub struct AppState {
    image: GrayImage,
    pgm: Bytes,
    template: TemplateConfig,
}

impl AppState {
    pub fn new(image: GrayImage, template: TemplateConfig) -> Self {
        let pgm = Bytes::from(image.encode_pgm());
        AppState { image, pgm, template }
    }

    pub fn load(cfg: &ServiceConfig) -> anyhow::Result<Self> {
        cfg.template.validate()?;
        let mut image = GrayImage::load_pgm(&cfg.image_path)?;
        if let Some(s) = cfg.spacing {
            image.set_spacing(s)?;
        }
        Ok(Self::new(image, cfg.template))
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct SegmentRequest {
    pub seed_x: f64,
    pub seed_y: f64,
    pub rays: Option<usize>,
    pub nodes: Option<usize>,
    pub radius_px: Option<f64>,
    pub delta: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentResponse {
    pub seed: [f64; 2],
    pub points: Vec<[f64; 2]>,
    pub diameter_mm: f64,
    pub area_mm2: f64,
    pub elapsed_ms: f64,
    pub cut_indices: Vec<usize>,
}

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

impl From<CoreError> for ApiError {
    fn from(e: CoreError) -> Self {
        let status = match e {
            CoreError::Config(_) => StatusCode::UNPROCESSABLE_ENTITY,
            CoreError::Domain(_) => StatusCode::BAD_REQUEST,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError(status, e.to_string())
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/image", get(image))
        .route("/api/segment", post(segment))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

async fn image(State(state): State<Arc<AppState>>) -> Response {
    let img = &state.image;
    let mut res = (
        [(header::CONTENT_TYPE, "application/octet-stream")],
        state.pgm.clone(),
    )
        .into_response();
    let headers = res.headers_mut();
    for (name, value) in [
        ("x-width", img.width().to_string()),
        ("x-height", img.height().to_string()),
        ("x-spacing", img.spacing().to_string()),
    ] {
        headers.insert(name, HeaderValue::from_str(&value).expect("numeric header"));
    }
    res
}

fn template_for(req: &SegmentRequest, base: TemplateConfig) -> Result<TemplateConfig, ApiError> {
    let cfg = TemplateConfig {
        num_rays: req.rays.unwrap_or(base.num_rays),
        nodes_per_ray: req.nodes.unwrap_or(base.nodes_per_ray),
        radius_px: req.radius_px.unwrap_or(base.radius_px),
        delta: req.delta.unwrap_or(base.delta),
    };
    cfg.validate()?;
    if cfg.num_rays.saturating_mul(cfg.nodes_per_ray) > MAX_REQUEST_NODES {
        return Err(ApiError(
            StatusCode::UNPROCESSABLE_ENTITY,
            format!("template has more than {MAX_REQUEST_NODES} nodes"),
        ));
    }
    Ok(cfg)
}

async fn segment(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Json<SegmentResponse>, ApiError> {
    let req: SegmentRequest = serde_json::from_slice(&body)
        .map_err(|e| ApiError(StatusCode::BAD_REQUEST, format!("malformed request body: {e}")))?;
    let cfg = template_for(&req, state.template)?;
    let seed = Point::new(req.seed_x, req.seed_y);
    if !state.image.contains_strictly(seed) {
        return Err(ApiError(
            StatusCode::BAD_REQUEST,
            format!("seed ({}, {}) is outside the image", seed.x, seed.y),
        ));
    }
    let res = tokio::task::spawn_blocking(move || segment_at(&state.image, seed, &cfg))
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    Ok(Json(SegmentResponse {
        seed: [res.seed.x, res.seed.y],
        points: res.contour.points.iter().map(|p| [p.x, p.y]).collect(),
        diameter_mm: res.diameter_mm,
        area_mm2: res.area_mm2,
        elapsed_ms: res.elapsed_ms,
        cut_indices: res.cut.cut_indices,
    }))
}

/// Serves on the loopback interface until the process is stopped.
pub async fn serve(cfg: ServiceConfig) -> anyhow::Result<()> {
    let state = Arc::new(AppState::load(&cfg)?);
    let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, cfg.port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await?;
    Ok(())
}
