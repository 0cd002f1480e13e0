//! Drives a session the way the HTTP service does, taking hints for every
//! human move. Pass `--serve` to start the server on port 8080 instead.

use std::sync::Arc;

use redistricting_ghost::prelude::*;
use redistricting_ghost::session::{http, CreateRequest, EngineRequest, MoveRequest, SessionStore};

fn main() {
    let store = SessionStore::new();
    if std::env::args().any(|a| a == "--serve") {
        let rt = tokio::runtime::Runtime::new().unwrap();
        rt.block_on(http::serve(([127, 0, 0, 1], 8080).into(), Arc::new(store)))
            .unwrap();
        return;
    }

    let request = CreateRequest {
        j: 3,
        m: 1,
        n: 5,
        human_side: Player::B,
        engine: EngineRequest {
            kind: StrategyKind::CrackMajority,
            q: None,
            seed: None,
        },
        score_q: None,
    };
    let mut snap = store.create_session(&request).unwrap();
    let id = snap.id.clone();
    while !snap.terminal {
        let hint = store.get_hint(&id).unwrap();
        println!("hint {} {:?} ({})", hint.district, hint.color, hint.tag);
        snap = store
            .post_move(
                &id,
                MoveRequest {
                    district: hint.district,
                    color: hint.color,
                },
            )
            .unwrap();
    }
    println!("{}", serde_json::to_string_pretty(&snap).unwrap());
    print!("{}", store.export_replay(&id).unwrap().to_text());
}
