//! Read-only HTTP API serving mask tables, scatter series, composited
//! rasters and hover queries under `/api/v1`.

mod api;
mod cache;
mod error;
mod state;

use std::sync::Arc;

use axum::http::{HeaderValue, Method};
use axum::Router;
use tower_http::cors::{AllowOrigin, CorsLayer};

pub use api::{CategoryJson, SeriesJson};
pub use cache::FillCache;
pub use error::ApiError;
pub use state::{ServerConfig, SessionState, Which};

pub const API_PREFIX: &str = "/api/v1";

/// `cors_origin` of `None` or `"*"` allows any origin.
pub fn router(state: Arc<SessionState>, cors_origin: Option<&str>) -> Result<Router, String> {
    let origin = match cors_origin {
        None | Some("*") => AllowOrigin::any(),
        Some(o) => AllowOrigin::exact(
            HeaderValue::from_str(o).map_err(|e| format!("bad CORS origin {o:?}: {e}"))?,
        ),
    };
    let cors = CorsLayer::new()
        .allow_methods([Method::GET])
        .allow_origin(origin);
    Ok(Router::new()
        .nest(API_PREFIX, api::routes())
        .layer(cors)
        .with_state(state))
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    listener: tokio::net::TcpListener,
    app: Router,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, app)
        .with_graceful_shutdown(shutdown)
        .await
}
