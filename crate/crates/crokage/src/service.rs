//! Embedded HTTP endpoint: POST /search and GET /health over one shared,
//! read-only engine handle.

use std::net::SocketAddr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::Duration;

use serde::Serialize;
use tiny_http::{Header, Method, Request, Response, Server};

use crate::engine::{EngineHandle, QueryRequest};
use crate::error::{Error, Result};

/// GET /health payload.
#[derive(Debug, Serialize)]
struct HealthResponse {
    docs: usize,
    dim: usize,
    status: &'static str,
}

#[derive(Debug, Serialize)]
struct ErrorResponse {
    error: String,
}

/// A running server; dropping it (or calling [`ServeHandle::stop`]) shuts
/// the listener down.
pub struct ServeHandle {
    stop: Arc<AtomicBool>,
    addr: SocketAddr,
    workers: Vec<JoinHandle<()>>,
}

impl ServeHandle {
    /// The bound address (useful with port 0).
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// Signals the workers to exit and joins them.
    pub fn stop(mut self) {
        self.shutdown();
    }

    /// Blocks until the workers exit (they only exit after `stop`).
    pub fn join(mut self) {
        for worker in self.workers.drain(..) {
            let _ = worker.join();
        }
    }

    fn shutdown(&mut self) {
        self.stop.store(true, Ordering::Relaxed);
        for worker in self.workers.drain(..) {
            let _ = worker.join();
        }
    }
}

impl std::fmt::Debug for ServeHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ServeHandle")
            .field("addr", &self.addr)
            .field("workers", &self.workers.len())
            .finish()
    }
}

impl Drop for ServeHandle {
    fn drop(&mut self) {
        self.shutdown();
    }
}

/// How long a worker waits for a request before re-checking the stop flag.
const POLL_INTERVAL: Duration = Duration::from_millis(50);

/// Starts the HTTP endpoint on 127.0.0.1:`port` (0 picks a free port) with
/// `threads` accept workers sharing the engine read-only.
pub fn serve(engine: Arc<EngineHandle>, port: u16, threads: usize) -> Result<ServeHandle> {
    if threads < 1 {
        return Err(Error::validation("serve needs at least one worker thread"));
    }
    let server = Server::http(("127.0.0.1", port))
        .map_err(|e| Error::internal(format!("failed to bind 127.0.0.1:{port}: {e}")))?;
    let addr = match server.server_addr() {
        tiny_http::ListenAddr::IP(addr) => addr,
        #[allow(unreachable_patterns)]
        _ => return Err(Error::internal("server bound to a non-IP address")),
    };
    let server = Arc::new(server);
    let stop = Arc::new(AtomicBool::new(false));
    let workers = (0..threads)
        .map(|_| {
            let server = Arc::clone(&server);
            let engine = Arc::clone(&engine);
            let stop = Arc::clone(&stop);
            std::thread::spawn(move || {
                // recv_timeout rather than recv: tiny_http's unblock wakes
                // only one blocked receiver, so polling is the reliable way
                // to stop several workers.
                while !stop.load(Ordering::Relaxed) {
                    match server.recv_timeout(POLL_INTERVAL) {
                        Ok(Some(request)) => handle_request(&engine, request),
                        Ok(None) => {}
                        Err(_) => break,
                    }
                }
            })
        })
        .collect();
    Ok(ServeHandle { stop, addr, workers })
}

fn json_header() -> Header {
    Header::from_bytes(&b"Content-Type"[..], &b"application/json"[..])
        .expect("static header is valid")
}

fn respond_json<T: Serialize>(request: Request, status: u16, body: &T) {
    let body = serde_json::to_string(body).expect("response types serialize");
    let response = Response::from_string(body).with_status_code(status).with_header(json_header());
    // The client may have hung up; nothing useful to do about it here.
    let _ = request.respond(response);
}

fn respond_error(request: Request, status: u16, message: impl Into<String>) {
    respond_json(request, status, &ErrorResponse { error: message.into() });
}

fn handle_request(engine: &EngineHandle, mut request: Request) {
    match (request.method().clone(), request.url().to_string().as_str()) {
        (Method::Get, "/health") => {
            let health =
                HealthResponse { docs: engine.doc_count(), dim: engine.dim(), status: "ok" };
            respond_json(request, 200, &health);
        }
        (Method::Post, "/search") => {
            let mut body = String::new();
            if request.as_reader().read_to_string(&mut body).is_err() {
                respond_error(request, 400, "request body is not valid UTF-8");
                return;
            }
            let query: QueryRequest = match serde_json::from_str(&body) {
                Ok(query) => query,
                Err(e) => {
                    respond_error(request, 400, format!("malformed request: {e}"));
                    return;
                }
            };
            match engine.handle_query(&query) {
                Ok(response) => respond_json(request, 200, &response),
                Err(e @ Error::Validation { .. }) => respond_error(request, 400, e.to_string()),
                Err(e) => respond_error(request, 500, e.to_string()),
            }
        }
        _ => respond_error(request, 404, "not found (try GET /health or POST /search)"),
    }
}
