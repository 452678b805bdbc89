//! JSON-over-HTTP access to one context's lattice, report, sub-hierarchies
//! and navigation sessions.

use std::collections::HashMap;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use crate::context::FormalContext;
use crate::error::Error;
use crate::export::{
    ConceptDetail, DeltaDocument, LatticeDocument, MoveDocument, PosetDocument, ReportDocument, SessionDocument,
};
use crate::lattice::{BuildOptions, ConceptId, ConceptLattice, DEFAULT_MAX_CONCEPTS};
use crate::navigation::NavigationSession;
use crate::subhierarchy::{subhierarchy, PosetKind};
use crate::variability::{report_for, ReportOptions};

pub const DEFAULT_PORT: u16 = 8080;
pub const DEFAULT_SESSION_TTL: Duration = Duration::from_secs(30 * 60);
pub const PORT_ENV: &str = "GALEX_PORT";

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    pub address: IpAddr,
    pub port: u16,
    pub context_path: PathBuf,
    pub max_concepts: usize,
    pub static_dir: Option<PathBuf>,
    pub session_ttl: Duration,
}

impl ServiceConfig {
    pub fn new(context_path: PathBuf) -> Self {
        ServiceConfig {
            address: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: DEFAULT_PORT,
            context_path,
            max_concepts: DEFAULT_MAX_CONCEPTS,
            static_dir: None,
            session_ttl: DEFAULT_SESSION_TTL,
        }
    }

    /// Replaces the port with `GALEX_PORT` when that variable is set.
    pub fn apply_env(mut self) -> Result<Self, Error> {
        if let Ok(raw) = std::env::var(PORT_ENV) {
            self.port = raw
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("{PORT_ENV}=`{raw}` is not a port number")))?;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.port == 0 {
            return Err(Error::InvalidConfig("port must be in 1..=65535".into()));
        }
        if self.max_concepts < 1 {
            return Err(Error::InvalidConfig("concept ceiling must be at least 1".into()));
        }
        Ok(())
    }

    pub fn socket_addr(&self) -> SocketAddr {
        SocketAddr::new(self.address, self.port)
    }
}

struct SessionSlot {
    session: NavigationSession,
    last_used: Instant,
}

pub struct AppState {
    lattice: Arc<ConceptLattice>,
    lattice_doc: LatticeDocument,
    sessions: Mutex<HashMap<String, Arc<Mutex<SessionSlot>>>>,
    ttl: Duration,
}

impl AppState {
    pub fn new(lattice: Arc<ConceptLattice>, ttl: Duration) -> Arc<Self> {
        Arc::new(AppState {
            lattice_doc: LatticeDocument::new(&lattice),
            lattice,
            sessions: Mutex::new(HashMap::new()),
            ttl,
        })
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<SessionSlot>>, ApiError> {
        let mut table = self.sessions.lock().expect("session table poisoned");
        let now = Instant::now();
        table.retain(|_, slot| {
            let slot = slot.lock().expect("session poisoned");
            now.duration_since(slot.last_used) < self.ttl
        });
        table
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::UnknownSession(id.to_string()))
    }

    fn insert(&self, session: NavigationSession) -> String {
        let id = uuid::Uuid::new_v4().to_string();
        let slot = SessionSlot {
            session,
            last_used: Instant::now(),
        };
        self.sessions
            .lock()
            .expect("session table poisoned")
            .insert(id.clone(), Arc::new(Mutex::new(slot)));
        id
    }
}

#[derive(Debug)]
pub enum ApiError {
    Core(Error),
    UnknownSession(String),
    BadRequest(String),
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError::Core(e)
    }
}

#[derive(Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub detail: String,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, code, detail) = match self {
            ApiError::Core(e) => {
                let status = match &e {
                    Error::UnknownConcept(_) | Error::UnknownAttribute(_) | Error::UnknownObject(_) => {
                        StatusCode::NOT_FOUND
                    }
                    Error::NotAdjacent { .. } => StatusCode::CONFLICT,
                    Error::InvalidThreshold(_)
                    | Error::InvalidSet(_)
                    | Error::InvalidConfig(_)
                    | Error::Json(_)
                    | Error::MalformedTable(_)
                    | Error::DuplicateName { .. }
                    | Error::EmptyContext(_) => StatusCode::BAD_REQUEST,
                    _ => StatusCode::INTERNAL_SERVER_ERROR,
                };
                (status, e.code().to_string(), e.to_string())
            }
            ApiError::UnknownSession(id) => (
                StatusCode::NOT_FOUND,
                "UnknownSession".into(),
                format!("no session `{id}`"),
            ),
            ApiError::BadRequest(detail) => (StatusCode::BAD_REQUEST, "BadRequest".into(), detail),
        };
        (status, Json(ErrorBody { error: code, detail })).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::BadRequest(format!("invalid request body: {e}")))
}

/// Session state plus everything the explorer needs to render it.
#[derive(Serialize, Deserialize)]
pub struct SessionView {
    #[serde(flatten)]
    pub session: SessionDocument,
    pub concept: ConceptDetail,
    pub moves: Vec<MoveDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<DeltaDocument>,
}

fn view(id: &str, s: &NavigationSession, delta: Option<DeltaDocument>) -> ApiResult<SessionView> {
    let l = s.lattice();
    Ok(SessionView {
        session: SessionDocument::new(id, s),
        concept: ConceptDetail::new(l, s.current())?,
        moves: s
            .available_moves()
            .iter()
            .map(|m| MoveDocument::new(l.context(), m))
            .collect(),
        delta,
    })
}

async fn get_context(State(st): State<Arc<AppState>>) -> Json<crate::context::ContextDocument> {
    Json(st.lattice.context().to_document())
}

async fn get_lattice(State(st): State<Arc<AppState>>) -> Json<LatticeDocument> {
    Json(st.lattice_doc.clone())
}

async fn get_concept(State(st): State<Arc<AppState>>, Path(id): Path<usize>) -> ApiResult<Json<ConceptDetail>> {
    Ok(Json(ConceptDetail::new(&st.lattice, ConceptId(id))?))
}

#[derive(Deserialize)]
struct ReportQuery {
    #[serde(default)]
    exhaustive: bool,
}

async fn get_report(State(st): State<Arc<AppState>>, Query(q): Query<ReportQuery>) -> Json<ReportDocument> {
    let report = report_for(
        &st.lattice,
        &ReportOptions {
            exhaustive: q.exhaustive,
        },
    );
    Json(ReportDocument::new(st.lattice.context(), &report))
}

#[derive(Deserialize)]
struct SubhierarchyQuery {
    kind: Option<String>,
    n: Option<usize>,
}

async fn get_subhierarchy(
    State(st): State<Arc<AppState>>,
    Query(q): Query<SubhierarchyQuery>,
) -> ApiResult<Json<PosetDocument>> {
    let kind = match (&q.kind, q.n) {
        (Some(k), _) => k.parse::<PosetKind>()?,
        (None, Some(_)) => PosetKind::Iceberg,
        (None, None) => PosetKind::Aoc,
    };
    let poset = subhierarchy(&st.lattice, kind, q.n)?;
    Ok(Json(PosetDocument::new(&st.lattice, &poset)))
}

#[derive(Deserialize, Default)]
struct StartRequest {
    at: Option<usize>,
}

async fn create_session(State(st): State<Arc<AppState>>, body: Bytes) -> ApiResult<(StatusCode, Json<SessionView>)> {
    let req: StartRequest = if body.iter().all(u8::is_ascii_whitespace) {
        StartRequest::default()
    } else {
        parse_body(&body)?
    };
    let session = NavigationSession::start(st.lattice.clone(), req.at.map(ConceptId))?;
    let v = view("", &session, None)?;
    let id = st.insert(session);
    Ok((
        StatusCode::CREATED,
        Json(SessionView {
            session: SessionDocument {
                session_id: id,
                ..v.session
            },
            ..v
        }),
    ))
}

async fn get_session(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    let slot = st.session(&id)?;
    let mut slot = slot.lock().expect("session poisoned");
    slot.last_used = Instant::now();
    Ok(Json(view(&id, &slot.session, None)?))
}

#[derive(Deserialize)]
struct TargetRequest {
    target: usize,
}

async fn move_session(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<SessionView>> {
    let req: TargetRequest = parse_body(&body)?;
    let slot = st.session(&id)?;
    let mut slot = slot.lock().expect("session poisoned");
    slot.last_used = Instant::now();
    let mv = slot.session.apply_move(ConceptId(req.target))?;
    let delta = DeltaDocument::new(st.lattice.context(), &mv.delta);
    Ok(Json(view(&id, &slot.session, Some(delta))?))
}

async fn jump_session(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<SessionView>> {
    let req: TargetRequest = parse_body(&body)?;
    let slot = st.session(&id)?;
    let mut slot = slot.lock().expect("session poisoned");
    slot.last_used = Instant::now();
    let delta = slot.session.jump(ConceptId(req.target))?;
    let delta = DeltaDocument::new(st.lattice.context(), &delta);
    Ok(Json(view(&id, &slot.session, Some(delta))?))
}

#[derive(Serialize, Deserialize)]
pub struct ReachableEntry {
    pub object: String,
    pub concept: usize,
}

async fn get_reachable(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<Json<Vec<ReachableEntry>>> {
    let slot = st.session(&id)?;
    let mut slot = slot.lock().expect("session poisoned");
    slot.last_used = Instant::now();
    let ctx = st.lattice.context();
    Ok(Json(
        slot.session
            .reachable_configurations()
            .into_iter()
            .map(|(o, c)| ReachableEntry {
                object: ctx.objects()[o].clone(),
                concept: c.0,
            })
            .collect(),
    ))
}

pub fn router(state: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/context", get(get_context))
        .route("/api/lattice", get(get_lattice))
        .route("/api/concepts/{id}", get(get_concept))
        .route("/api/report", get(get_report))
        .route("/api/subhierarchy", get(get_subhierarchy))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/move", post(move_session))
        .route("/api/sessions/{id}/jump", post(jump_session))
        .route("/api/sessions/{id}/reachable", get(get_reachable))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Loads the context, builds its lattice and serves until Ctrl-C.
pub async fn serve(config: ServiceConfig) -> Result<(), Error> {
    config.validate()?;
    let ctx = FormalContext::from_path(&config.context_path)?;
    let lattice = ConceptLattice::build_with(
        &ctx,
        &BuildOptions {
            max_concepts: config.max_concepts,
        },
    )?;
    let state = AppState::new(Arc::new(lattice), config.session_ttl);
    let app = router(state, config.static_dir.clone());
    let listener = tokio::net::TcpListener::bind(config.socket_addr()).await?;
    eprintln!(
        "galex: serving {} on http://{}",
        config.context_path.display(),
        listener.local_addr()?
    );
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
