use std::fmt;
use std::io::{self, Read, Write};
use std::str::FromStr;

use crate::BridgeError;

/// Frames larger than this are rejected before allocation.
pub const MAX_FRAME: u32 = 64 * 1024 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    EvalScoped,
    EvalGlobal,
    Ping,
    Shutdown,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::EvalScoped => "eval_scoped",
            Op::EvalGlobal => "eval_global",
            Op::Ping => "ping",
            Op::Shutdown => "shutdown",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Op {
    type Err = BridgeError;

    fn from_str(s: &str) -> Result<Op, BridgeError> {
        Ok(match s {
            "eval_scoped" => Op::EvalScoped,
            "eval_global" => Op::EvalGlobal,
            "ping" => Op::Ping,
            "shutdown" => Op::Shutdown,
            other => return Err(BridgeError::Frame(format!("unknown op {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Request {
    pub id: u64,
    pub op: Op,
    pub payload: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub id: u64,
    pub status: Status,
    pub payload: String,
}

// Both bodies are "<id> <word> <payload>"; the payload may contain spaces.
fn split_body(body: &str) -> Result<(u64, &str, &str), BridgeError> {
    let mut parts = body.splitn(3, ' ');
    let id = parts.next().unwrap_or_default();
    let id = id.parse().map_err(|_| BridgeError::Frame(format!("bad request id {id:?}")))?;
    let word = parts.next().ok_or_else(|| BridgeError::Frame("missing op".into()))?;
    Ok((id, word, parts.next().unwrap_or("")))
}

impl Request {
    pub fn new(id: u64, op: Op, payload: impl Into<String>) -> Request {
        Request { id, op, payload: payload.into() }
    }

    pub fn encode(&self) -> String {
        format!("{} {} {}", self.id, self.op, self.payload)
    }

    pub fn decode(body: &str) -> Result<Request, BridgeError> {
        let (id, op, payload) = split_body(body)?;
        Ok(Request { id, op: op.parse()?, payload: payload.to_string() })
    }
}

impl Response {
    pub fn ok(id: u64, payload: impl Into<String>) -> Response {
        Response { id, status: Status::Ok, payload: payload.into() }
    }

    pub fn error(id: u64, msg: impl Into<String>) -> Response {
        Response { id, status: Status::Error, payload: msg.into() }
    }

    pub fn encode(&self) -> String {
        let status = match self.status {
            Status::Ok => "ok",
            Status::Error => "error",
        };
        format!("{} {} {}", self.id, status, self.payload)
    }

    pub fn decode(body: &str) -> Result<Response, BridgeError> {
        let (id, status, payload) = split_body(body)?;
        let status = match status {
            "ok" => Status::Ok,
            "error" => Status::Error,
            other => return Err(BridgeError::Frame(format!("unknown status {other:?}"))),
        };
        Ok(Response { id, status, payload: payload.to_string() })
    }
}

/// Writes one frame: a 4-byte big-endian length, then the UTF-8 body.
pub fn write_frame(w: &mut impl Write, body: &str) -> io::Result<()> {
    let len = u32::try_from(body.len())
        .ok()
        .filter(|&n| n <= MAX_FRAME)
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "frame too large"))?;
    w.write_all(&len.to_be_bytes())?;
    w.write_all(body.as_bytes())?;
    w.flush()
}

/// Reads one frame. `Ok(None)` means the peer closed the stream cleanly
/// between frames.
pub fn read_frame(r: &mut impl Read) -> io::Result<Option<String>> {
    let mut len = [0u8; 4];
    let mut got = 0;
    while got < 4 {
        match r.read(&mut len[got..])? {
            0 if got == 0 => return Ok(None),
            0 => return Err(io::ErrorKind::UnexpectedEof.into()),
            n => got += n,
        }
    }
    let len = u32::from_be_bytes(len);
    if len > MAX_FRAME {
        return Err(io::Error::new(io::ErrorKind::InvalidData, format!("frame of {len} bytes exceeds limit")));
    }
    let mut body = vec![0u8; len as usize];
    r.read_exact(&mut body)?;
    String::from_utf8(body).map(Some).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
}
