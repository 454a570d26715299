use std::io::{self, BufReader, BufWriter};
use std::net::{TcpListener, TcpStream};

use skepsis_core::cexpr::{parse_fullform, print_fullform};

use crate::frame::{read_frame, write_frame, Op, Request, Response};
use crate::{Backend, Scope};

pub const DEFAULT_ADDR: &str = "127.0.0.1:7878";

/// The address to use: the explicit one, else `BRIDGE_ADDR`, else the
/// default.
pub fn resolve_addr(explicit: Option<&str>) -> String {
    explicit
        .map(str::to_string)
        .or_else(|| std::env::var("BRIDGE_ADDR").ok().filter(|s| !s.is_empty()))
        .unwrap_or_else(|| DEFAULT_ADDR.to_string())
}

pub fn bind(addr: Option<&str>) -> io::Result<TcpListener> {
    TcpListener::bind(resolve_addr(addr))
}

/// Answers one request. Returns the response and whether the server
/// should stop afterwards.
pub fn handle_request<B: Backend + ?Sized>(backend: &mut B, req: &Request) -> (Response, bool) {
    let scope = match req.op {
        Op::Ping => return (Response::ok(req.id, "pong"), false),
        Op::Shutdown => return (Response::ok(req.id, "bye"), true),
        Op::EvalScoped => Scope::Scoped,
        Op::EvalGlobal => Scope::Global,
    };
    let e = match parse_fullform(&req.payload) {
        Ok(e) => e,
        Err(err) => return (Response::error(req.id, err.to_string()), false),
    };
    match backend.eval(&e, scope) {
        Ok(v) => (Response::ok(req.id, print_fullform(&v)), false),
        Err(err) => (Response::error(req.id, err.to_string()), false),
    }
}

/// Serves a single connection until the peer hangs up or asks for
/// shutdown. Returns true on shutdown.
pub fn serve_connection<B: Backend + ?Sized>(backend: &mut B, stream: TcpStream) -> io::Result<bool> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut writer = BufWriter::new(stream);
    while let Some(body) = read_frame(&mut reader)? {
        let (resp, stop) = match Request::decode(&body) {
            Ok(req) => handle_request(backend, &req),
            // keep the connection; the id is unknown so echo what we can
            Err(err) => {
                let id = body.split(' ').next().and_then(|s| s.parse().ok()).unwrap_or(0);
                (Response::error(id, err.to_string()), false)
            }
        };
        write_frame(&mut writer, &resp.encode())?;
        if stop {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Accepts connections one at a time and serves requests strictly in
/// order until a shutdown request arrives.
pub fn serve<B: Backend + ?Sized>(listener: &TcpListener, backend: &mut B) -> io::Result<()> {
    for stream in listener.incoming() {
        match serve_connection(backend, stream?) {
            Ok(true) => return Ok(()),
            Ok(false) => {}
            // a peer vanishing mid-frame should not take the server down
            Err(err) if is_peer_error(&err) => {}
            Err(err) => return Err(err),
        }
    }
    Ok(())
}

fn is_peer_error(err: &io::Error) -> bool {
    matches!(
        err.kind(),
        io::ErrorKind::UnexpectedEof
            | io::ErrorKind::ConnectionReset
            | io::ErrorKind::ConnectionAborted
            | io::ErrorKind::BrokenPipe
            | io::ErrorKind::InvalidData
    )
}
