//! OAuth 1.0a request signing (HMAC-SHA1).

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use base64::Engine as _;
use hmac::{Hmac, Mac};
use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use rand::distr::{Alphanumeric, SampleString};
use sha1::Sha1;
use url::Url;

use super::Credentials;

/// Everything except the unreserved set `A-Z a-z 0-9 - . _ ~`.
const OAUTH_ENCODE: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'.')
    .remove(b'_')
    .remove(b'~');

pub fn encode(s: &str) -> String {
    utf8_percent_encode(s, OAUTH_ENCODE).to_string()
}

/// Scheme and host lowercased, default ports dropped, no query or fragment.
pub fn base_string_uri(url: &Url) -> String {
    let mut out = format!(
        "{}://{}",
        url.scheme(),
        url.host_str().unwrap_or_default().to_lowercase()
    );
    if let Some(port) = url.port() {
        out.push_str(&format!(":{port}"));
    }
    out.push_str(url.path());
    out
}

/// Signature over `method`, the base URI and all request + oauth parameters.
pub fn signature(
    method: &str,
    base_uri: &str,
    params: &[(String, String)],
    consumer_secret: &str,
    token_secret: &str,
) -> String {
    let mut encoded: Vec<(String, String)> =
        params.iter().map(|(k, v)| (encode(k), encode(v))).collect();
    encoded.sort();
    let param_string = encoded
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join("&");
    let base = format!(
        "{}&{}&{}",
        method.to_ascii_uppercase(),
        encode(base_uri),
        encode(&param_string)
    );
    let key = format!("{}&{}", encode(consumer_secret), encode(token_secret));
    let mut mac =
        Hmac::<Sha1>::new_from_slice(key.as_bytes()).expect("HMAC accepts any key length");
    mac.update(base.as_bytes());
    base64::engine::general_purpose::STANDARD.encode(mac.finalize().into_bytes())
}

/// Builds `Authorization: OAuth ...` header values.
#[derive(Clone)]
pub struct Signer {
    creds: Credentials,
}

impl Signer {
    pub fn new(creds: Credentials) -> Self {
        Self { creds }
    }

    pub fn authorization(&self, method: &str, url: &Url, query: &[(String, String)]) -> String {
        let nonce = Alphanumeric.sample_string(&mut rand::rng(), 32);
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or_default();
        self.authorization_with(method, url, query, &nonce, timestamp)
    }

    pub fn authorization_with(
        &self,
        method: &str,
        url: &Url,
        query: &[(String, String)],
        nonce: &str,
        timestamp: u64,
    ) -> String {
        let mut oauth = vec![
            (
                "oauth_consumer_key".to_owned(),
                self.creds.consumer_key().to_owned(),
            ),
            ("oauth_nonce".to_owned(), nonce.to_owned()),
            ("oauth_signature_method".to_owned(), "HMAC-SHA1".to_owned()),
            ("oauth_timestamp".to_owned(), timestamp.to_string()),
            (
                "oauth_token".to_owned(),
                self.creds.access_token().to_owned(),
            ),
            ("oauth_version".to_owned(), "1.0".to_owned()),
        ];
        let all: Vec<_> = query.iter().cloned().chain(oauth.iter().cloned()).collect();
        let sig = signature(
            method,
            &base_string_uri(url),
            &all,
            self.creds.consumer_secret(),
            self.creds.access_token_secret(),
        );
        oauth.push(("oauth_signature".to_owned(), sig));
        let parts: Vec<String> = oauth
            .iter()
            .map(|(k, v)| format!("{}=\"{}\"", encode(k), encode(v)))
            .collect();
        format!("OAuth {}", parts.join(", "))
    }
}

/// Parses an `OAuth k="v", ...` header into decoded pairs.
pub fn parse_authorization(header: &str) -> Option<BTreeMap<String, String>> {
    let rest = header.trim().strip_prefix("OAuth ")?;
    let mut out = BTreeMap::new();
    for part in rest.split(',') {
        let (k, v) = part.trim().split_once('=')?;
        let v = v.trim().strip_prefix('"')?.strip_suffix('"')?;
        let decode = |s: &str| {
            percent_decode_str(s)
                .decode_utf8()
                .ok()
                .map(|c| c.into_owned())
        };
        out.insert(decode(k.trim())?, decode(v)?);
    }
    Some(out)
}
