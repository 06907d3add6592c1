//! `/api/v1` handlers. Every number is a core-module result, serialized
//! as is.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::header;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use segscope_core::analytics::{series_for_task1, series_for_task3, AxisMeaning, ScatterSeries};
use segscope_core::compositor::{
    category_at, render_mask_rgb, weight_at, Colormap, ColormapId, ColormapKind,
};
use segscope_core::ingest::encode_rgb;
use segscope_core::{CategoryId, CompositeParams, OccupancyRecord, Rgb};
use serde::Serialize;

use crate::error::ApiError;
use crate::state::{SessionState, Which};

type AppState = Arc<SessionState>;
type Params = Query<HashMap<String, String>>;
type ApiResult<T> = Result<T, ApiError>;

pub fn routes() -> Router<AppState> {
    Router::new()
        .route("/categories", get(categories))
        .route("/colormaps", get(colormaps))
        .route("/images", get(images))
        .route("/scatter/overview", get(overview))
        .route("/scatter/detail", get(detail))
        .route("/image/{id}/composite", get(composite))
        .route("/image/{id}/weight", get(weight))
        .route("/image/{id}/maskinfo", get(maskinfo))
        .route("/image/{id}/maskrender", get(maskrender))
        .route("/image/{id}/occupancy", get(occupancy))
}

fn required<'a>(q: &'a HashMap<String, String>, key: &str) -> ApiResult<&'a str> {
    q.get(key)
        .map(String::as_str)
        .ok_or_else(|| ApiError::bad_request(format!("missing query parameter {key:?}")))
}

fn parsed<T: std::str::FromStr>(q: &HashMap<String, String>, key: &str) -> ApiResult<Option<T>> {
    q.get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| ApiError::bad_request(format!("bad value {v:?} for {key:?}")))
        })
        .transpose()
}

fn coords(q: &HashMap<String, String>) -> ApiResult<(u32, u32)> {
    let x =
        parsed(q, "x")?.ok_or_else(|| ApiError::bad_request("missing query parameter \"x\""))?;
    let y =
        parsed(q, "y")?.ok_or_else(|| ApiError::bad_request("missing query parameter \"y\""))?;
    Ok((x, y))
}

/// Absent means every category; an empty value means none.
fn selection(state: &SessionState, q: &HashMap<String, String>) -> ApiResult<BTreeSet<CategoryId>> {
    match q.get("selected") {
        None => Ok(CategoryId::all().collect()),
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|name| {
                state.categories.category_by_name(name).map_err(|_| {
                    ApiError::bad_request(format!("unknown category {name:?} in selection"))
                })
            })
            .collect(),
    }
}

fn png(bytes: Vec<u8>) -> Response {
    ([(header::CONTENT_TYPE, "image/png")], bytes).into_response()
}

#[derive(Serialize)]
pub struct CategoryJson<'a> {
    pub id: CategoryId,
    pub name: &'a str,
    pub color: Rgb,
}

async fn categories(State(s): State<AppState>) -> Response {
    let list: Vec<CategoryJson> = s
        .categories
        .entries()
        .iter()
        .map(|e| CategoryJson {
            id: e.id,
            name: &e.name,
            color: e.color,
        })
        .collect();
    Json(list).into_response()
}

#[derive(Serialize)]
struct ColormapJson {
    name: &'static str,
    kind: ColormapKind,
    bins: Option<u32>,
}

async fn colormaps() -> Json<Vec<ColormapJson>> {
    Json(
        ColormapId::ALL
            .iter()
            .map(|&id| ColormapJson {
                name: id.name(),
                kind: id.kind(),
                bins: Colormap::new(id).bins(),
            })
            .collect(),
    )
}

#[derive(Serialize)]
struct ImageJson<'a> {
    image_id: &'a str,
    has_weights: bool,
}

async fn images(State(s): State<AppState>) -> Response {
    let list: Vec<ImageJson> = s
        .manifest
        .entries
        .iter()
        .map(|e| ImageJson {
            image_id: &e.image_id,
            has_weights: e.weight_dir_path.is_some(),
        })
        .collect();
    Json(list).into_response()
}

#[derive(Serialize)]
pub struct SeriesJson<'a> {
    pub category: &'a str,
    pub category_id: CategoryId,
    pub x_meaning: AxisMeaning,
    pub y_meaning: AxisMeaning,
    pub points: Vec<(f64, f64)>,
}

fn series_json(s: &SessionState, series: Vec<ScatterSeries>) -> Vec<SeriesJson<'_>> {
    series
        .into_iter()
        .map(|ser| SeriesJson {
            category: s.categories.name(ser.category),
            category_id: ser.category,
            x_meaning: ser.x_meaning,
            y_meaning: ser.y_meaning,
            points: ser.points,
        })
        .collect()
}

async fn overview(State(s): State<AppState>) -> Response {
    Json(series_json(&s, series_for_task1(&s.mask_table, None))).into_response()
}

async fn detail(State(s): State<AppState>, Query(q): Params) -> ApiResult<Response> {
    let c = s.category(required(&q, "category")?)?;
    let mut series = series_json(&s, series_for_task1(&s.mask_table, Some(c)));
    Ok(Json(series.pop()).into_response())
}

async fn composite(
    State(s): State<AppState>,
    Path(id): Path<String>,
    Query(q): Params,
) -> ApiResult<Response> {
    s.entry(&id)?;
    let category = s.category(required(&q, "category")?)?;
    let colormap = match q.get("colormap") {
        Some(name) => name.parse::<ColormapId>()?,
        None => ColormapId::Turbo,
    };
    let alpha1 = parsed(&q, "alpha1")?.unwrap_or(CompositeParams::DEFAULT_ALPHA1);
    let alpha2 = parsed(&q, "alpha2")?.unwrap_or(CompositeParams::DEFAULT_ALPHA2);
    let params = CompositeParams::new(alpha1, alpha2, colormap)?;
    let bytes = s.composite(&id, category, params).await?;
    Ok(png(bytes.as_ref().clone()))
}

#[derive(Serialize)]
struct WeightJson {
    weight: f64,
}

async fn weight(
    State(s): State<AppState>,
    Path(id): Path<String>,
    Query(q): Params,
) -> ApiResult<Json<WeightJson>> {
    s.entry(&id)?;
    let category = s.category(required(&q, "category")?)?;
    let (x, y) = coords(&q)?;
    let field = s.weight_field(&id, category).await?;
    Ok(Json(WeightJson {
        weight: weight_at(&field, x, y)? as f64,
    }))
}

#[derive(Serialize)]
struct MaskInfoJson<'a> {
    category: &'a str,
    id: CategoryId,
}

async fn maskinfo(
    State(s): State<AppState>,
    Path(id): Path<String>,
    Query(q): Params,
) -> ApiResult<Response> {
    s.entry(&id)?;
    let which: Which = required(&q, "which")?.parse()?;
    let (x, y) = coords(&q)?;
    let mask = s.mask(&id, which).await?;
    let (cid, name) = category_at(&mask, &s.categories, x, y)?;
    Ok(Json(MaskInfoJson {
        category: name,
        id: cid,
    })
    .into_response())
}

async fn maskrender(
    State(s): State<AppState>,
    Path(id): Path<String>,
    Query(q): Params,
) -> ApiResult<Response> {
    s.entry(&id)?;
    let which: Which = required(&q, "which")?.parse()?;
    let selected = selection(&s, &q)?;
    let mask = s.mask(&id, which).await?;
    let img = render_mask_rgb(&mask, &s.categories, &selected);
    Ok(png(encode_rgb(&img)?))
}

#[derive(Serialize)]
struct RecordJson<'a> {
    category: &'a str,
    #[serde(flatten)]
    record: &'a OccupancyRecord,
}

#[derive(Serialize)]
struct PlotsJson<'a> {
    given_vs_pred: Vec<SeriesJson<'a>>,
    iou_vs_given: Vec<SeriesJson<'a>>,
    iou_vs_pred: Vec<SeriesJson<'a>>,
}

#[derive(Serialize)]
struct OccupancyJson<'a> {
    image_id: &'a str,
    records: Vec<RecordJson<'a>>,
    plots: PlotsJson<'a>,
}

async fn occupancy(
    State(s): State<AppState>,
    Path(id): Path<String>,
    Query(q): Params,
) -> ApiResult<Response> {
    s.entry(&id)?;
    let selected = selection(&s, &q)?;
    let records = s.occupancy.get(&id).map(Vec::as_slice).unwrap_or_default();
    let groups = series_for_task3(records, &selected);
    let body = OccupancyJson {
        image_id: &id,
        records: records
            .iter()
            .map(|r| RecordJson {
                category: s.categories.name(r.category),
                record: r,
            })
            .collect(),
        plots: PlotsJson {
            given_vs_pred: series_json(&s, groups.given_vs_pred),
            iou_vs_given: series_json(&s, groups.iou_vs_given),
            iou_vs_pred: series_json(&s, groups.iou_vs_pred),
        },
    };
    Ok(Json(body).into_response())
}
