// Feeds points one at a time to the incremental clusterer and reports
// what each insertion did.

use seqscan::{ClusterState, InsertOutcome, Position};

fn main() {
    let mut state = ClusterState::new(1.0, 3).unwrap();
    let pts = [(0.0, 0.0), (0.5, 0.0), (3.0, 0.0), (0.0, 0.5), (2.5, 0.0), (3.0, 0.5), (1.5, 0.0), (1.5, 2.0)];
    for (k, &(x, y)) in pts.iter().enumerate() {
        let id = k + 1;
        let effect = state.insert(id, Position::new(x, y), id as f64).unwrap();
        let what = match effect.outcome {
            InsertOutcome::Noise => "noise".to_string(),
            InsertOutcome::Joined(c) => format!("joined {c}"),
            InsertOutcome::Created(c) => format!("created {c}"),
            InsertOutcome::Merged { from, into } => {
                let from: Vec<String> = from.iter().map(|c| c.to_string()).collect();
                format!("merged {} into {into}", from.join(" + "))
            }
        };
        println!("{id}: {what}, relabeled {:?}", effect.labeled);
    }
    for c in state.clusters() {
        let members: Vec<usize> = state.cluster_members(c).collect();
        println!("{c}: {members:?}");
    }
}
