//! Transcript-replaying HTTP server standing in for the search API in tests.
//!
//! A transcript is JSON:
//!
//! ```json
//! {
//!   "credentials": {"consumer_key": "...", "consumer_secret": "...",
//!                   "access_token": "...", "access_token_secret": "..."},
//!   "exchanges": [
//!     {"request": {"path": "/1.1/search/tweets.json",
//!                  "params": {"q": "fake news", "count": "100", "max_id": null}},
//!      "response": {"status": 200, "headers": {}, "body": {"statuses": []}}}
//!   ]
//! }
//! ```
//!
//! Exchanges are consumed in order, one per request. Listed params must match
//! exactly; a `null` param must be absent; unlisted params are ignored. A
//! response carries either a JSON `body` or a plain `body_text`.
//!
//! When `credentials` are present every request must carry a valid OAuth
//! 1.0a signature for that key set, otherwise the server answers 401.
//! `GET .../account/verify_credentials.json` is answered directly and does
//! not consume an exchange.

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;

use serde::Deserialize;

use super::oauth;
use super::VERIFY_PATH;

#[derive(Debug, Clone, Deserialize)]
pub struct Transcript {
    #[serde(default)]
    pub credentials: Option<TranscriptCredentials>,
    #[serde(default)]
    pub exchanges: Vec<Exchange>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct TranscriptCredentials {
    pub consumer_key: String,
    pub consumer_secret: String,
    pub access_token: String,
    pub access_token_secret: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Exchange {
    pub request: ExpectedRequest,
    pub response: CannedResponse,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExpectedRequest {
    pub path: String,
    #[serde(default)]
    pub params: BTreeMap<String, Option<String>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CannedResponse {
    #[serde(default = "ok_status")]
    pub status: u16,
    #[serde(default)]
    pub headers: BTreeMap<String, String>,
    #[serde(default)]
    pub body: Option<serde_json::Value>,
    #[serde(default)]
    pub body_text: Option<String>,
}

fn ok_status() -> u16 {
    200
}

impl Transcript {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: impl AsRef<Path>) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(std::io::Error::other)
    }
}

/// One request as seen by the server.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordedRequest {
    pub path: String,
    pub params: BTreeMap<String, String>,
    pub authorized: bool,
    pub status: u16,
}

#[derive(Default)]
struct State {
    next: usize,
    log: Vec<RecordedRequest>,
    mismatches: Vec<String>,
}

pub struct MockServer {
    addr: SocketAddr,
    state: Arc<Mutex<State>>,
    shutdown: Arc<AtomicBool>,
    handle: Option<JoinHandle<()>>,
}

impl MockServer {
    /// Binds to an ephemeral localhost port and starts serving.
    pub fn start(transcript: Transcript) -> std::io::Result<Self> {
        let listener = TcpListener::bind("127.0.0.1:0")?;
        let addr = listener.local_addr()?;
        let state = Arc::new(Mutex::new(State::default()));
        let shutdown = Arc::new(AtomicBool::new(false));
        let handle = {
            let state = Arc::clone(&state);
            let shutdown = Arc::clone(&shutdown);
            std::thread::spawn(move || {
                for stream in listener.incoming() {
                    if shutdown.load(Ordering::SeqCst) {
                        break;
                    }
                    if let Ok(stream) = stream {
                        let _ = handle_connection(stream, &transcript, &state);
                    }
                }
            })
        };
        Ok(Self {
            addr,
            state,
            shutdown,
            handle: Some(handle),
        })
    }

    /// API base, e.g. `http://127.0.0.1:PORT/1.1`.
    pub fn base_url(&self) -> String {
        format!("http://{}/1.1", self.addr)
    }

    pub fn url(&self, path: &str) -> String {
        format!("http://{}{}", self.addr, path)
    }

    pub fn requests(&self) -> Vec<RecordedRequest> {
        self.state.lock().expect("mock state").log.clone()
    }

    /// Requests whose path ends with `suffix`.
    pub fn requests_to(&self, suffix: &str) -> Vec<RecordedRequest> {
        self.requests()
            .into_iter()
            .filter(|r| r.path.ends_with(suffix))
            .collect()
    }

    /// Requests that did not match the transcript.
    pub fn mismatches(&self) -> Vec<String> {
        self.state.lock().expect("mock state").mismatches.clone()
    }

    /// Exchanges not yet consumed.
    pub fn remaining(&self, transcript_len: usize) -> usize {
        transcript_len.saturating_sub(self.state.lock().expect("mock state").next)
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.shutdown.store(true, Ordering::SeqCst);
        let _ = TcpStream::connect(self.addr);
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

struct Request {
    path: String,
    params: Vec<(String, String)>,
    host: String,
    authorization: Option<String>,
}

fn read_request(stream: &TcpStream) -> std::io::Result<Option<Request>> {
    let mut reader = BufReader::new(stream);
    let mut line = String::new();
    if reader.read_line(&mut line)? == 0 {
        return Ok(None);
    }
    let mut parts = line.split_whitespace();
    let (Some(_method), Some(target)) = (parts.next(), parts.next()) else {
        return Ok(None);
    };
    let (path, query) = target.split_once('?').unwrap_or((target, ""));
    let params = url::form_urlencoded::parse(query.as_bytes())
        .into_owned()
        .collect();
    let mut host = String::new();
    let mut authorization = None;
    loop {
        let mut header = String::new();
        if reader.read_line(&mut header)? == 0 || header.trim().is_empty() {
            break;
        }
        if let Some((name, value)) = header.split_once(':') {
            match name.trim().to_ascii_lowercase().as_str() {
                "host" => host = value.trim().to_owned(),
                "authorization" => authorization = Some(value.trim().to_owned()),
                _ => {}
            }
        }
    }
    Ok(Some(Request {
        path: path.to_owned(),
        params,
        host,
        authorization,
    }))
}

fn verify_oauth(req: &Request, creds: &TranscriptCredentials) -> bool {
    let Some(fields) = req
        .authorization
        .as_deref()
        .and_then(oauth::parse_authorization)
    else {
        return false;
    };
    if fields.get("oauth_consumer_key") != Some(&creds.consumer_key)
        || fields.get("oauth_token") != Some(&creds.access_token)
        || fields.get("oauth_signature_method").map(String::as_str) != Some("HMAC-SHA1")
    {
        return false;
    }
    let Some(given) = fields.get("oauth_signature") else {
        return false;
    };
    let mut params = req.params.clone();
    params.extend(
        fields
            .iter()
            .filter(|(k, _)| k.as_str() != "oauth_signature")
            .map(|(k, v)| (k.clone(), v.clone())),
    );
    let base_uri = format!("http://{}{}", req.host.to_ascii_lowercase(), req.path);
    let expected = oauth::signature(
        "GET",
        &base_uri,
        &params,
        &creds.consumer_secret,
        &creds.access_token_secret,
    );
    &expected == given
}

struct Reply {
    status: u16,
    headers: BTreeMap<String, String>,
    content_type: &'static str,
    body: String,
}

impl Reply {
    fn json(status: u16, body: serde_json::Value) -> Self {
        Self {
            status,
            headers: BTreeMap::new(),
            content_type: "application/json",
            body: body.to_string(),
        }
    }
}

fn handle_connection(
    stream: TcpStream,
    transcript: &Transcript,
    state: &Mutex<State>,
) -> std::io::Result<()> {
    let Some(req) = read_request(&stream)? else {
        return Ok(());
    };
    let authorized = transcript
        .credentials
        .as_ref()
        .is_none_or(|c| verify_oauth(&req, c));
    let mut st = state.lock().expect("mock state");
    let reply = if !authorized {
        Reply::json(
            401,
            serde_json::json!({"errors": [{"code": 32, "message": "Could not authenticate you."}]}),
        )
    } else if req.path.ends_with(VERIFY_PATH) {
        Reply::json(
            200,
            serde_json::json!({"id_str": "1", "screen_name": "mock_user"}),
        )
    } else {
        match transcript.exchanges.get(st.next) {
            None => {
                st.mismatches.push(format!(
                    "unexpected request to {} (transcript exhausted)",
                    req.path
                ));
                Reply::json(500, serde_json::json!({"error": "transcript exhausted"}))
            }
            Some(ex) => {
                st.next += 1;
                match mismatch(&ex.request, &req) {
                    Some(why) => {
                        st.mismatches.push(why.clone());
                        Reply::json(500, serde_json::json!({ "error": why }))
                    }
                    None => canned(&ex.response),
                }
            }
        }
    };
    st.log.push(RecordedRequest {
        path: req.path.clone(),
        params: req.params.iter().cloned().collect(),
        authorized,
        status: reply.status,
    });
    drop(st);
    write_reply(stream, &reply)
}

fn mismatch(expected: &ExpectedRequest, req: &Request) -> Option<String> {
    if expected.path != req.path {
        return Some(format!("expected path {}, got {}", expected.path, req.path));
    }
    let got: HashMap<&str, &str> = req
        .params
        .iter()
        .map(|(k, v)| (k.as_str(), v.as_str()))
        .collect();
    for (key, want) in &expected.params {
        let have = got.get(key.as_str()).copied();
        if have != want.as_deref() {
            return Some(format!("param {key}: expected {want:?}, got {have:?}"));
        }
    }
    None
}

fn canned(resp: &CannedResponse) -> Reply {
    let (content_type, body) = match (&resp.body, &resp.body_text) {
        (Some(json), _) => ("application/json", json.to_string()),
        (None, Some(text)) => ("text/plain; charset=utf-8", text.clone()),
        (None, None) => ("text/plain; charset=utf-8", String::new()),
    };
    Reply {
        status: resp.status,
        headers: resp.headers.clone(),
        content_type,
        body,
    }
}

fn reason(status: u16) -> &'static str {
    match status {
        200 => "OK",
        401 => "Unauthorized",
        404 => "Not Found",
        429 => "Too Many Requests",
        500 => "Internal Server Error",
        503 => "Service Unavailable",
        _ => "Status",
    }
}

fn write_reply(mut stream: TcpStream, reply: &Reply) -> std::io::Result<()> {
    let mut head = format!(
        "HTTP/1.1 {} {}\r\nContent-Type: {}\r\nContent-Length: {}\r\nConnection: close\r\n",
        reply.status,
        reason(reply.status),
        reply.content_type,
        reply.body.len()
    );
    for (k, v) in &reply.headers {
        head.push_str(&format!("{k}: {v}\r\n"));
    }
    head.push_str("\r\n");
    stream.write_all(head.as_bytes())?;
    stream.write_all(reply.body.as_bytes())?;
    stream.flush()
}
