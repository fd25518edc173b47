//! A local HTTP server with scripted replies.

use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

/// (status, body, delay in ms)
pub type Reply = (u16, String, u64);

pub struct Stub {
    pub url: String,
    pub bodies: Arc<Mutex<Vec<String>>>,
}

/// Serves `respond(n, body)` for the n-th request (0-based).
pub fn stub(respond: impl Fn(usize, &str) -> Reply + Send + 'static) -> Stub {
    let server = tiny_http::Server::http("127.0.0.1:0").expect("bind stub");
    let url = format!("http://{}/v1/chat", server.server_addr().to_ip().expect("ip addr"));
    let bodies = Arc::new(Mutex::new(Vec::new()));
    let seen = bodies.clone();
    thread::spawn(move || {
        for mut req in server.incoming_requests() {
            let mut body = String::new();
            let _ = req.as_reader().read_to_string(&mut body);
            let n = {
                let mut b = seen.lock().unwrap();
                b.push(body.clone());
                b.len() - 1
            };
            let (code, text, delay) = respond(n, &body);
            if delay > 0 {
                thread::sleep(Duration::from_millis(delay));
            }
            let header = tiny_http::Header::from_bytes(&b"Content-Type"[..], &b"application/json"[..]).unwrap();
            let _ = req.respond(tiny_http::Response::from_string(text).with_status_code(code).with_header(header));
        }
    });
    Stub { url, bodies }
}


pub fn ok_body(text: &str) -> String {
    serde_json::json!({"text": text, "finish_reason": "stop", "usage": {"prompt_tokens": 10, "completion_tokens": 5}})
        .to_string()
}
