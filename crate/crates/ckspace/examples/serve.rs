//! The session service on a port (default 8080):
//! `cargo run --example serve -- 3000`.

fn main() -> std::io::Result<()> {
    let port = std::env::args()
        .nth(1)
        .map_or(Ok(8080), |p| p.parse())
        .expect("port");
    tokio::runtime::Runtime::new()?.block_on(ckspace::service::serve(port, None))
}
