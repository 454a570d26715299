use std::io::{BufReader, BufWriter};
use std::net::{TcpStream, ToSocketAddrs};

use skepsis_core::cexpr::{parse_fullform, print_fullform, CExpr};

use crate::frame::{read_frame, write_frame, Op, Request, Response, Status};
use crate::server::resolve_addr;
use crate::{Backend, BridgeError, Oracle, Scope};

/// A connection to an evaluation server. One request in flight at a time.
pub struct Client {
    reader: BufReader<TcpStream>,
    writer: BufWriter<TcpStream>,
    next_id: u64,
}

impl Client {
    pub fn connect(addr: impl ToSocketAddrs) -> Result<Client, BridgeError> {
        let stream = TcpStream::connect(addr)?;
        stream.set_nodelay(true)?;
        Ok(Client { reader: BufReader::new(stream.try_clone()?), writer: BufWriter::new(stream), next_id: 1 })
    }

    /// Connects to `BRIDGE_ADDR`, or the default address.
    pub fn connect_env() -> Result<Client, BridgeError> {
        Client::connect(resolve_addr(None))
    }

    /// Sends a raw request and waits for its response.
    pub fn request(&mut self, op: Op, payload: &str) -> Result<Response, BridgeError> {
        let id = self.next_id;
        self.next_id += 1;
        write_frame(&mut self.writer, &Request::new(id, op, payload).encode())?;
        let body = read_frame(&mut self.reader)?.ok_or_else(|| BridgeError::Frame("server closed the connection".into()))?;
        let resp = Response::decode(&body)?;
        if resp.id != id {
            return Err(BridgeError::Frame(format!("response id {} does not match request {id}", resp.id)));
        }
        Ok(resp)
    }

    fn eval(&mut self, op: Op, code: &str) -> Result<CExpr, BridgeError> {
        // `//` and the other infix forms are resolved here; the server only
        // ever sees FullForm.
        let e = parse_fullform(code)?;
        let resp = self.request(op, &print_fullform(&e))?;
        match resp.status {
            Status::Ok => Ok(parse_fullform(&resp.payload)?),
            Status::Error => Err(BridgeError::Remote(resp.payload)),
        }
    }

    pub fn ping(&mut self) -> Result<(), BridgeError> {
        self.simple(Op::Ping)
    }

    pub fn shutdown(mut self) -> Result<(), BridgeError> {
        self.simple(Op::Shutdown)
    }

    fn simple(&mut self, op: Op) -> Result<(), BridgeError> {
        let resp = self.request(op, "")?;
        match resp.status {
            Status::Ok => Ok(()),
            Status::Error => Err(BridgeError::Remote(resp.payload)),
        }
    }
}

impl Oracle for Client {
    fn execute(&mut self, code: &str) -> Result<CExpr, BridgeError> {
        self.eval(Op::EvalScoped, code)
    }

    fn execute_global(&mut self, code: &str) -> Result<CExpr, BridgeError> {
        self.eval(Op::EvalGlobal, code)
    }
}

/// An oracle that calls a backend in-process, without a socket.
pub struct LocalOracle<B> {
    pub backend: B,
}

impl<B: Backend> LocalOracle<B> {
    pub fn new(backend: B) -> LocalOracle<B> {
        LocalOracle { backend }
    }

    fn eval(&mut self, code: &str, scope: Scope) -> Result<CExpr, BridgeError> {
        let e = parse_fullform(code)?;
        self.backend.eval(&e, scope).map_err(|err| BridgeError::Remote(err.to_string()))
    }
}

impl<B: Backend> Oracle for LocalOracle<B> {
    fn execute(&mut self, code: &str) -> Result<CExpr, BridgeError> {
        self.eval(code, Scope::Scoped)
    }

    fn execute_global(&mut self, code: &str) -> Result<CExpr, BridgeError> {
        self.eval(code, Scope::Global)
    }
}
