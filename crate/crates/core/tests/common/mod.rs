#![allow(dead_code)]

use std::net::SocketAddr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use axum::extract::State;
use axum::http::StatusCode;
use axum::routing::post;
use axum::{Json, Router};
use serde_json::Value;

pub type Handler = Arc<dyn Fn(usize, &Value) -> (u16, Value) + Send + Sync>;

/// A scripted JSON server on a loopback port. The handler sees the 0-based
/// request number and the request body.
pub struct FakeServer {
    pub addr: SocketAddr,
    pub hits: Arc<AtomicUsize>,
    pub bodies: Arc<std::sync::Mutex<Vec<Value>>>,
    pub auth: Arc<std::sync::Mutex<Vec<Option<String>>>>,
}

#[derive(Clone)]
struct AppState {
    handler: Handler,
    hits: Arc<AtomicUsize>,
    bodies: Arc<std::sync::Mutex<Vec<Value>>>,
    auth: Arc<std::sync::Mutex<Vec<Option<String>>>>,
}

async fn handle(
    State(st): State<AppState>,
    headers: axum::http::HeaderMap,
    Json(body): Json<Value>,
) -> (StatusCode, Json<Value>) {
    let n = st.hits.fetch_add(1, Ordering::SeqCst);
    st.bodies.lock().unwrap().push(body.clone());
    st.auth.lock().unwrap().push(
        headers
            .get("authorization")
            .and_then(|v| v.to_str().ok())
            .map(str::to_string),
    );
    let (code, reply) = (st.handler)(n, &body);
    (StatusCode::from_u16(code).unwrap(), Json(reply))
}

impl FakeServer {
    pub fn start(handler: impl Fn(usize, &Value) -> (u16, Value) + Send + Sync + 'static) -> Self {
        let state = AppState {
            handler: Arc::new(handler),
            hits: Arc::new(AtomicUsize::new(0)),
            bodies: Arc::default(),
            auth: Arc::default(),
        };
        let (tx, rx) = std::sync::mpsc::channel();
        let st = state.clone();
        std::thread::spawn(move || {
            let rt = tokio::runtime::Builder::new_multi_thread()
                .worker_threads(2)
                .enable_all()
                .build()
                .unwrap();
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
                tx.send(listener.local_addr().unwrap()).unwrap();
                let app = Router::new().route("/", post(handle)).with_state(st);
                axum::serve(listener, app).await.unwrap();
            });
        });
        Self {
            addr: rx.recv().unwrap(),
            hits: state.hits,
            bodies: state.bodies,
            auth: state.auth,
        }
    }

    pub fn url(&self) -> String {
        format!("http://{}/", self.addr)
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::SeqCst)
    }
}

/// Runs the survey service on a loopback port in a background thread.
pub fn start_survey(svc: Arc<medcs::survey::SurveyService>) -> SocketAddr {
    let (tx, rx) = std::sync::mpsc::channel();
    std::thread::spawn(move || {
        let rt = tokio::runtime::Builder::new_multi_thread()
            .worker_threads(2)
            .enable_all()
            .build()
            .unwrap();
        rt.block_on(async move {
            let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
            tx.send(listener.local_addr().unwrap()).unwrap();
            medcs::survey::server::serve(listener, svc).await.unwrap();
        });
    });
    rx.recv().unwrap()
}
