//! Road network model: a directed graph of junctions and one-way roads,
//! loaded from a line-oriented text file, with congestion-dependent road
//! speeds, reachability queries, and travel-time route planning.
//!
//! The file format is:
//!
//! ```text
//! junctions <N>
//! <id> <lights:0|1>     # N lines
//! roads <M>
//! <from> <to> <length_m> <max_speed_ms>    # M lines
//! ```
//!
//! `#` starts a comment; tokens are whitespace-separated. Road ids are
//! assigned `0..M-1` in file order, and each junction's outgoing list
//! preserves that order; traffic light rotation depends on it.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

pub type JunctionId = u32;
pub type RoadId = u32;

#[derive(Debug, Error, PartialEq)]
pub enum NetworkError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate junction id {0}")]
    DuplicateJunction(JunctionId),
    #[error("road {road} references unknown junction {junction}")]
    DanglingEndpoint { road: RoadId, junction: JunctionId },
    #[error("road {road} has non-positive length {length}")]
    NonPositiveLength { road: RoadId, length: f64 },
    #[error("road {road} has non-positive max speed {speed}")]
    NonPositiveSpeed { road: RoadId, speed: f64 },
    #[error("unknown junction id {0}")]
    UnknownJunction(JunctionId),
    #[error("no route from junction {from} to junction {to}")]
    NoRoute { from: JunctionId, to: JunctionId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Junction {
    pub id: JunctionId,
    pub has_traffic_lights: bool,
    /// Outgoing road ids in input-file order.
    pub outgoing: Vec<RoadId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Road {
    pub id: RoadId,
    pub from: JunctionId,
    pub to: JunctionId,
    /// Metres, strictly positive.
    pub length: f64,
    /// Metres per second, strictly positive.
    pub max_speed: f64,
    /// Current occupancy. Zero after parsing; maintained by the owning
    /// junction actor during simulation.
    pub vehicle_count: u32,
}

/// Congestion law constants: `v(n) = max(v_floor, v_max / (1 + alpha n))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CongestionParams {
    pub alpha: f64,
    pub v_floor: f64,
}

impl Default for CongestionParams {
    fn default() -> Self {
        Self { alpha: 0.1, v_floor: 1.0 }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RoadNetwork {
    junctions: Vec<Junction>,
    roads: Vec<Road>,
    index_of: HashMap<JunctionId, usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    pub junction_sequence: Vec<JunctionId>,
    pub road_sequence: Vec<RoadId>,
    /// Predicted travel time in seconds under the planning weights.
    pub predicted_time: f64,
}

impl RoadNetwork {
    /// Builds a network from explicit parts, running the same validation
    /// as the file parser.
    pub fn from_parts(
        junctions: Vec<(JunctionId, bool)>,
        roads: Vec<(JunctionId, JunctionId, f64, f64)>,
    ) -> Result<Self, NetworkError> {
        let mut net = RoadNetwork::default();
        for (id, lights) in junctions {
            net.add_junction(id, lights)?;
        }
        for (from, to, length, max_speed) in roads {
            net.add_road(from, to, length, max_speed)?;
        }
        Ok(net)
    }

    fn add_junction(&mut self, id: JunctionId, has_traffic_lights: bool) -> Result<(), NetworkError> {
        if self.index_of.contains_key(&id) {
            return Err(NetworkError::DuplicateJunction(id));
        }
        self.index_of.insert(id, self.junctions.len());
        self.junctions.push(Junction { id, has_traffic_lights, outgoing: Vec::new() });
        Ok(())
    }

    fn add_road(
        &mut self,
        from: JunctionId,
        to: JunctionId,
        length: f64,
        max_speed: f64,
    ) -> Result<RoadId, NetworkError> {
        let id = self.roads.len() as RoadId;
        if length.is_nan() || length <= 0.0 {
            return Err(NetworkError::NonPositiveLength { road: id, length });
        }
        if max_speed.is_nan() || max_speed <= 0.0 {
            return Err(NetworkError::NonPositiveSpeed { road: id, speed: max_speed });
        }
        if !self.index_of.contains_key(&from) {
            return Err(NetworkError::DanglingEndpoint { road: id, junction: from });
        }
        if !self.index_of.contains_key(&to) {
            return Err(NetworkError::DanglingEndpoint { road: id, junction: to });
        }
        self.roads.push(Road { id, from, to, length, max_speed, vehicle_count: 0 });
        let idx = self.index_of[&from];
        self.junctions[idx].outgoing.push(id);
        Ok(id)
    }

    pub fn junctions(&self) -> &[Junction] {
        &self.junctions
    }

    pub fn roads(&self) -> &[Road] {
        &self.roads
    }

    pub fn junction(&self, id: JunctionId) -> Result<&Junction, NetworkError> {
        self.index_of
            .get(&id)
            .map(|&i| &self.junctions[i])
            .ok_or(NetworkError::UnknownJunction(id))
    }

    pub fn road(&self, id: RoadId) -> &Road {
        &self.roads[id as usize]
    }

    pub fn road_mut(&mut self, id: RoadId) -> &mut Road {
        &mut self.roads[id as usize]
    }

    pub fn contains_junction(&self, id: JunctionId) -> bool {
        self.index_of.contains_key(&id)
    }

    /// Serializes back to the input file format. Parsing the result yields
    /// an identical network.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "junctions {}", self.junctions.len());
        for j in &self.junctions {
            let _ = writeln!(out, "{} {}", j.id, u8::from(j.has_traffic_lights));
        }
        let _ = writeln!(out, "roads {}", self.roads.len());
        for r in &self.roads {
            let _ = writeln!(out, "{} {} {} {}", r.from, r.to, r.length, r.max_speed);
        }
        out
    }
}

/// Parses and validates a network file. Errors carry the 1-based line
/// number of the offending entry.
pub fn parse_network(text: &str) -> Result<RoadNetwork, NetworkError> {
    let mut net = RoadNetwork::default();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty());

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| NetworkError::Parse { line: 1, message: "empty file".into() })?;
    let junction_count = parse_section_header(line_no, header, "junctions")?;

    for _ in 0..junction_count {
        let (line_no, line) = lines.next().ok_or_else(|| NetworkError::Parse {
            line: line_no,
            message: "unexpected end of file in junction list".into(),
        })?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(NetworkError::Parse {
                line: line_no,
                message: format!("expected '<id> <lights:0|1>', got '{line}'"),
            });
        }
        let id: JunctionId = parse_field(line_no, fields[0], "junction id")?;
        let lights = match fields[1] {
            "0" => false,
            "1" => true,
            other => {
                return Err(NetworkError::Parse {
                    line: line_no,
                    message: format!("lights flag must be 0 or 1, got '{other}'"),
                })
            }
        };
        net.add_junction(id, lights)?;
    }

    let (line_no, header) = lines.next().ok_or_else(|| NetworkError::Parse {
        line: line_no,
        message: "missing 'roads <M>' section".into(),
    })?;
    let road_count = parse_section_header(line_no, header, "roads")?;

    for _ in 0..road_count {
        let (line_no, line) = lines.next().ok_or_else(|| NetworkError::Parse {
            line: line_no,
            message: "unexpected end of file in road list".into(),
        })?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(NetworkError::Parse {
                line: line_no,
                message: format!("expected '<from> <to> <length_m> <max_speed_ms>', got '{line}'"),
            });
        }
        let from: JunctionId = parse_field(line_no, fields[0], "from junction id")?;
        let to: JunctionId = parse_field(line_no, fields[1], "to junction id")?;
        let length: f64 = parse_field(line_no, fields[2], "length")?;
        let max_speed: f64 = parse_field(line_no, fields[3], "max speed")?;
        net.add_road(from, to, length, max_speed)?;
    }

    if let Some((line_no, line)) = lines.next() {
        return Err(NetworkError::Parse {
            line: line_no,
            message: format!("trailing content after road list: '{line}'"),
        });
    }
    Ok(net)
}

fn parse_section_header(line: usize, text: &str, keyword: &str) -> Result<usize, NetworkError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 || fields[0] != keyword {
        return Err(NetworkError::Parse {
            line,
            message: format!("expected '{keyword} <count>', got '{text}'"),
        });
    }
    parse_field(line, fields[1], "count")
}

fn parse_field<T: std::str::FromStr>(
    line: usize,
    text: &str,
    what: &str,
) -> Result<T, NetworkError> {
    text.parse().map_err(|_| NetworkError::Parse {
        line,
        message: format!("invalid {what}: '{text}'"),
    })
}

/// Congestion-dependent road speed: `max(v_floor, v_max / (1 + alpha n))`,
/// equal to `v_max` on an empty road. The floor never lifts the result
/// above `v_max`.
pub fn current_speed(road: &Road, params: &CongestionParams) -> f64 {
    current_speed_at(road.max_speed, road.vehicle_count, params)
}

pub fn current_speed_at(max_speed: f64, vehicle_count: u32, params: &CongestionParams) -> f64 {
    let floor = params.v_floor.min(max_speed);
    (max_speed / (1.0 + params.alpha * vehicle_count as f64)).max(floor)
}

/// True iff a directed path exists from `from` to `to`; reflexive.
pub fn reachable(net: &RoadNetwork, from: JunctionId, to: JunctionId) -> Result<bool, NetworkError> {
    net.junction(from)?;
    net.junction(to)?;
    Ok(reachable_set(net, from).contains(&to))
}

fn reachable_set(net: &RoadNetwork, from: JunctionId) -> HashSet<JunctionId> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(from);
    queue.push_back(from);
    while let Some(j) = queue.pop_front() {
        let junction = net.junction(j).expect("visited junction exists");
        for &road_id in &junction.outgoing {
            let next = net.road(road_id).to;
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Reachability memoized per source junction, for callers issuing many
/// queries against the same immutable network.
#[derive(Debug, Default)]
pub struct ReachCache {
    sets: HashMap<JunctionId, HashSet<JunctionId>>,
}

impl ReachCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reachable(
        &mut self,
        net: &RoadNetwork,
        from: JunctionId,
        to: JunctionId,
    ) -> Result<bool, NetworkError> {
        net.junction(from)?;
        net.junction(to)?;
        let set = self.sets.entry(from).or_insert_with(|| reachable_set(net, from));
        Ok(set.contains(&to))
    }
}

/// Minimum-predicted-travel-time route from `start` to `dest`.
///
/// Edge weight is `length / speed` where roads leaving `start` use their
/// congestion-adjusted current speed (occupancy supplied by
/// `occupancy_of`) and every other road uses its maximum speed. Ties are
/// broken by fewer edges, then by lexicographically smaller junction
/// sequence, so planning is fully deterministic.
pub fn plan_route_with(
    net: &RoadNetwork,
    start: JunctionId,
    dest: JunctionId,
    params: &CongestionParams,
    mut occupancy_of: impl FnMut(RoadId) -> u32,
) -> Result<Route, NetworkError> {
    use std::cmp::Ordering;
    use std::collections::BinaryHeap;

    net.junction(start)?;
    net.junction(dest)?;

    #[derive(Debug, Clone, PartialEq)]
    struct Label {
        time: f64,
        hops: u32,
        junction: JunctionId,
        via_road: Option<RoadId>,
        parent: Option<JunctionId>,
    }

    // Max-heap: invert the comparison to pop the smallest label first.
    #[derive(PartialEq)]
    struct HeapEntry(Label);
    impl Eq for HeapEntry {}
    impl PartialOrd for HeapEntry {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for HeapEntry {
        fn cmp(&self, other: &Self) -> Ordering {
            other
                .0
                .time
                .total_cmp(&self.0.time)
                .then_with(|| other.0.hops.cmp(&self.0.hops))
                .then_with(|| other.0.junction.cmp(&self.0.junction))
        }
    }

    let mut settled: HashMap<JunctionId, Label> = HashMap::new();
    let mut best: HashMap<JunctionId, Label> = HashMap::new();
    let mut heap = BinaryHeap::new();

    let start_label =
        Label { time: 0.0, hops: 0, junction: start, via_road: None, parent: None };
    best.insert(start, start_label.clone());
    heap.push(HeapEntry(start_label));

    // Junction sequence from `start` to `j` under the settled parents,
    // used only to resolve (time, hops) ties lexicographically.
    let junction_path = |settled: &HashMap<JunctionId, Label>, label: &Label| -> Vec<JunctionId> {
        let mut path = vec![label.junction];
        let mut parent = label.parent;
        while let Some(p) = parent {
            path.push(p);
            parent = settled[&p].parent;
        }
        path.reverse();
        path
    };

    while let Some(HeapEntry(label)) = heap.pop() {
        if settled.contains_key(&label.junction) {
            continue;
        }
        // Stale heap entries: only the current best label may settle.
        match best.get(&label.junction) {
            Some(current) if *current == label => {}
            _ => continue,
        }
        settled.insert(label.junction, label.clone());
        if label.junction == dest {
            break;
        }
        let junction = net.junction(label.junction).expect("settled junction exists");
        for &road_id in &junction.outgoing {
            let road = net.road(road_id);
            if settled.contains_key(&road.to) {
                continue;
            }
            let speed = if label.junction == start {
                current_speed_at(road.max_speed, occupancy_of(road_id), params)
            } else {
                road.max_speed
            };
            let candidate = Label {
                time: label.time + road.length / speed,
                hops: label.hops + 1,
                junction: road.to,
                via_road: Some(road_id),
                parent: Some(label.junction),
            };
            let improves = match best.get(&road.to) {
                None => true,
                Some(existing) => match candidate
                    .time
                    .total_cmp(&existing.time)
                    .then_with(|| candidate.hops.cmp(&existing.hops))
                {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        // Full lexicographic comparison of the junction
                        // sequences; rare, so reconstruction is fine.
                        let mut cand_path = junction_path(&settled, &label);
                        cand_path.push(road.to);
                        let exist_path = {
                            let parent = existing.parent.expect("non-start label has parent");
                            let mut p = junction_path(&settled, &settled[&parent]);
                            p.push(road.to);
                            p
                        };
                        cand_path < exist_path
                    }
                },
            };
            if improves {
                best.insert(road.to, candidate.clone());
                heap.push(HeapEntry(candidate));
            }
        }
    }

    let end = settled
        .get(&dest)
        .ok_or(NetworkError::NoRoute { from: start, to: dest })?;
    let mut junction_sequence = vec![end.junction];
    let mut road_sequence = Vec::new();
    let mut cursor = end.clone();
    while let (Some(parent), Some(via)) = (cursor.parent, cursor.via_road) {
        junction_sequence.push(parent);
        road_sequence.push(via);
        cursor = settled[&parent].clone();
    }
    junction_sequence.reverse();
    road_sequence.reverse();
    Ok(Route { junction_sequence, road_sequence, predicted_time: end.time })
}

/// [`plan_route_with`] reading occupancy from the `vehicle_count` stored
/// on each road.
pub fn plan_route(
    net: &RoadNetwork,
    start: JunctionId,
    dest: JunctionId,
    params: &CongestionParams,
) -> Result<Route, NetworkError> {
    plan_route_with(net, start, dest, params, |road| net.road(road).vehicle_count)
}

/// Generates a strongly connected benchmark network: a one-way ring over
/// `junctions` nodes plus `chords` random shortcut roads. Road lengths
/// are 50..500 m, speed limits 10..30 m/s, and roughly half the
/// junctions get traffic lights; everything is drawn from a SplitMix64
/// stream, so the same arguments always produce the same network.
pub fn synthetic_network(junctions: u32, chords: u32, seed: u64) -> RoadNetwork {
    use crate::rng::SplitMix64;
    assert!(junctions >= 2, "a ring needs at least two junctions");
    let mut rng = SplitMix64::new(seed);
    let junction_list: Vec<(JunctionId, bool)> =
        (0..junctions).map(|id| (id, rng.next_below(2) == 1)).collect();
    let mut roads = Vec::with_capacity((junctions + chords) as usize);
    for i in 0..junctions {
        let length = rng.next_range(50, 500) as f64;
        let speed = rng.next_range(10, 30) as f64;
        roads.push((i, (i + 1) % junctions, length, speed));
    }
    for _ in 0..chords {
        let from = rng.next_below(junctions as u64) as JunctionId;
        let mut to = rng.next_below(junctions as u64) as JunctionId;
        if to == from {
            to = (to + 1) % junctions;
        }
        let length = rng.next_range(50, 500) as f64;
        let speed = rng.next_range(10, 30) as f64;
        roads.push((from, to, length, speed));
    }
    RoadNetwork::from_parts(junction_list, roads).expect("generated network is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> &'static str {
        "junctions 2\n0 0\n1 0\nroads 1\n0 1 100 10\n"
    }

    #[test]
    fn parses_minimal_network() {
        let net = parse_network(minimal()).unwrap();
        assert_eq!(net.junctions().len(), 2);
        assert_eq!(net.roads().len(), 1);
        let road = net.road(0);
        assert_eq!((road.from, road.to), (0, 1));
        assert_eq!(road.length, 100.0);
        assert_eq!(road.max_speed, 10.0);
        assert_eq!(net.junction(0).unwrap().outgoing, vec![0]);
    }

    #[test]
    fn parses_comments_and_blank_lines() {
        let text = "# a network\njunctions 2\n0 1  # has lights\n\n1 0\nroads 1\n0 1 50 5\n";
        let net = parse_network(text).unwrap();
        assert!(net.junction(0).unwrap().has_traffic_lights);
        assert!(!net.junction(1).unwrap().has_traffic_lights);
    }

    #[test]
    fn rejects_dangling_road_endpoint() {
        let text = "junctions 2\n0 0\n1 0\nroads 1\n0 9 100 10\n";
        assert_eq!(
            parse_network(text),
            Err(NetworkError::DanglingEndpoint { road: 0, junction: 9 })
        );
    }

    #[test]
    fn rejects_non_positive_length_and_speed() {
        let text = "junctions 2\n0 0\n1 0\nroads 1\n0 1 -5 10\n";
        assert_eq!(parse_network(text), Err(NetworkError::NonPositiveLength { road: 0, length: -5.0 }));
        let text = "junctions 2\n0 0\n1 0\nroads 1\n0 1 5 0\n";
        assert_eq!(parse_network(text), Err(NetworkError::NonPositiveSpeed { road: 0, speed: 0.0 }));
    }

    #[test]
    fn rejects_duplicate_junction_ids() {
        let text = "junctions 2\n0 0\n0 1\nroads 0\n";
        assert_eq!(parse_network(text), Err(NetworkError::DuplicateJunction(0)));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_network("junctions 1\n0 2\nroads 0\n").unwrap_err();
        match err {
            NetworkError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        let err = parse_network("junctions 1\n0 0\nroads 1\n0 0 bad 10\n").unwrap_err();
        match err {
            NetworkError::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn current_speed_examples() {
        let params = CongestionParams::default();
        let mut road = Road { id: 0, from: 0, to: 1, length: 100.0, max_speed: 30.0, vehicle_count: 0 };
        assert_eq!(current_speed(&road, &params), 30.0);
        // Hand evaluation: 30 / (1 + 0.1 * 10) = 15.
        road.vehicle_count = 10;
        assert_eq!(current_speed(&road, &params), 15.0);
        // The floor engages for absurd occupancy.
        road.vehicle_count = 1_000_000;
        assert_eq!(current_speed(&road, &params), 1.0);
    }

    #[test]
    fn current_speed_monotone_and_bounded() {
        let params = CongestionParams::default();
        let mut last = f64::INFINITY;
        for n in 0..2000 {
            let v = current_speed_at(30.0, n, &params);
            assert!(v <= last + 1e-12);
            assert!((1.0..=30.0).contains(&v));
            last = v;
        }
        // A max speed below the configured floor still caps the result.
        assert_eq!(current_speed_at(0.5, 0, &params), 0.5);
    }

    #[test]
    fn reachability_examples() {
        let net = parse_network(minimal()).unwrap();
        assert!(reachable(&net, 0, 0).unwrap());
        assert!(reachable(&net, 0, 1).unwrap());
        assert!(!reachable(&net, 1, 0).unwrap());
        assert_eq!(reachable(&net, 0, 7), Err(NetworkError::UnknownJunction(7)));

        let chain = parse_network("junctions 3\n0 0\n1 0\n2 0\nroads 2\n0 1 10 5\n1 2 10 5\n").unwrap();
        assert!(reachable(&chain, 0, 2).unwrap());
        assert!(!reachable(&chain, 2, 0).unwrap());

        let mut cache = ReachCache::new();
        assert!(cache.reachable(&chain, 0, 2).unwrap());
        assert!(cache.reachable(&chain, 0, 2).unwrap());
        assert!(!cache.reachable(&chain, 2, 1).unwrap());
    }

    fn triangle() -> RoadNetwork {
        // A=0, B=1, C=2: A->B 10m, B->C 10m, A->C 25m, all 10 m/s.
        RoadNetwork::from_parts(
            vec![(0, false), (1, false), (2, false)],
            vec![(0, 1, 10.0, 10.0), (1, 2, 10.0, 10.0), (0, 2, 25.0, 10.0)],
        )
        .unwrap()
    }

    #[test]
    fn plan_route_single_road() {
        let net = parse_network(minimal()).unwrap();
        let route = plan_route(&net, 0, 1, &CongestionParams::default()).unwrap();
        assert_eq!(route.junction_sequence, vec![0, 1]);
        assert_eq!(route.road_sequence, vec![0]);
        assert_eq!(route.predicted_time, 10.0);
    }

    #[test]
    fn plan_route_prefers_faster_two_hop_path() {
        let net = triangle();
        let route = plan_route(&net, 0, 2, &CongestionParams::default()).unwrap();
        assert_eq!(route.junction_sequence, vec![0, 1, 2]);
        assert_eq!(route.predicted_time, 2.0);
    }

    #[test]
    fn plan_route_uses_current_speed_on_first_hop() {
        // Occupancy 40 drops the A->B current speed to 2 m/s, so the
        // two-hop path costs 10/2 + 10/10 = 6s and the direct 2.5s road
        // wins.
        let net = triangle();
        let congested = |road: RoadId| if road == 0 { 40 } else { 0 };
        assert_eq!(net.road(0).max_speed / (1.0 + 0.1 * 40.0), 2.0);
        let route = plan_route_with(&net, 0, 2, &CongestionParams::default(), congested).unwrap();
        assert_eq!(route.junction_sequence, vec![0, 2]);
        assert_eq!(route.predicted_time, 2.5);
    }

    #[test]
    fn plan_route_reports_no_route() {
        let net = parse_network(minimal()).unwrap();
        assert_eq!(
            plan_route(&net, 1, 0, &CongestionParams::default()),
            Err(NetworkError::NoRoute { from: 1, to: 0 })
        );
    }

    #[test]
    fn plan_route_breaks_ties_deterministically() {
        // Two equal-time, equal-hop paths 0->1->3 and 0->2->3; the
        // lexicographically smaller junction sequence must win.
        let net = RoadNetwork::from_parts(
            vec![(0, false), (1, false), (2, false), (3, false)],
            vec![
                (0, 2, 10.0, 10.0),
                (2, 3, 10.0, 10.0),
                (0, 1, 10.0, 10.0),
                (1, 3, 10.0, 10.0),
            ],
        )
        .unwrap();
        let route = plan_route(&net, 0, 3, &CongestionParams::default()).unwrap();
        assert_eq!(route.junction_sequence, vec![0, 1, 3]);

        // Fewer edges beats equal time with more edges.
        let net = RoadNetwork::from_parts(
            vec![(0, false), (1, false), (2, false)],
            vec![(0, 1, 10.0, 10.0), (1, 2, 10.0, 10.0), (0, 2, 20.0, 10.0)],
        )
        .unwrap();
        let route = plan_route(&net, 0, 2, &CongestionParams::default()).unwrap();
        assert_eq!(route.predicted_time, 2.0);
        assert_eq!(route.junction_sequence, vec![0, 2]);
    }

    #[test]
    fn serialize_round_trips() {
        let text = "junctions 3\n5 1\n7 0\n9 1\nroads 3\n5 7 100 10\n7 9 250.5 13.5\n9 5 80 8\n";
        let net = parse_network(text).unwrap();
        let reparsed = parse_network(&net.serialize()).unwrap();
        assert_eq!(net, reparsed);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        prop_compose! {
            fn arb_network()(
                junction_count in 2usize..8,
                road_specs in proptest::collection::vec((0usize..8, 0usize..8, 1u32..500, 1u32..40), 1..16),
                lights in proptest::collection::vec(any::<bool>(), 8),
            ) -> RoadNetwork {
                let junctions: Vec<(JunctionId, bool)> =
                    (0..junction_count).map(|i| (i as JunctionId, lights[i])).collect();
                let roads = road_specs
                    .into_iter()
                    .map(|(f, t, len, sp)| (
                        (f % junction_count) as JunctionId,
                        (t % junction_count) as JunctionId,
                        len as f64,
                        sp as f64,
                    ))
                    .collect();
                RoadNetwork::from_parts(junctions, roads).unwrap()
            }
        }

        /// Exhaustive minimum over all simple paths, accumulating edge
        /// weights in path order exactly as the planner does.
        fn brute_force_best_time(
            net: &RoadNetwork,
            start: JunctionId,
            dest: JunctionId,
            params: &CongestionParams,
        ) -> Option<f64> {
            fn weight(road: &Road, start: JunctionId, params: &CongestionParams) -> f64 {
                let speed = if road.from == start {
                    current_speed_at(road.max_speed, road.vehicle_count, params)
                } else {
                    road.max_speed
                };
                road.length / speed
            }
            #[allow(clippy::too_many_arguments)]
            fn dfs(
                net: &RoadNetwork,
                here: JunctionId,
                dest: JunctionId,
                start: JunctionId,
                time: f64,
                visited: &mut Vec<JunctionId>,
                best: &mut Option<f64>,
                params: &CongestionParams,
            ) {
                if here == dest {
                    if best.is_none_or(|b| time < b) {
                        *best = Some(time);
                    }
                    return;
                }
                for &road_id in &net.junction(here).unwrap().outgoing {
                    let road = net.road(road_id);
                    if visited.contains(&road.to) {
                        continue;
                    }
                    visited.push(road.to);
                    dfs(net, road.to, dest, start, time + weight(road, start, params), visited, best, params);
                    visited.pop();
                }
            }
            let mut best = None;
            let mut visited = vec![start];
            dfs(net, start, dest, start, 0.0, &mut visited, &mut best, params);
            best
        }

        proptest! {
            #[test]
            fn planner_matches_exhaustive_minimum(net in arb_network(), occ in 0u32..30) {
                let params = CongestionParams::default();
                let mut net = net;
                // Congest road 0 so the first-hop weighting matters.
                net.road_mut(0).vehicle_count = occ;
                let junction_ids: Vec<JunctionId> = net.junctions().iter().map(|j| j.id).collect();
                for &start in &junction_ids {
                    for &dest in &junction_ids {
                        let oracle = brute_force_best_time(&net, start, dest, &params);
                        match plan_route(&net, start, dest, &params) {
                            Ok(route) => {
                                prop_assert_eq!(Some(route.predicted_time), oracle);
                                // The route must respect road directions.
                                for (i, &road_id) in route.road_sequence.iter().enumerate() {
                                    let road = net.road(road_id);
                                    prop_assert_eq!(road.from, route.junction_sequence[i]);
                                    prop_assert_eq!(road.to, route.junction_sequence[i + 1]);
                                }
                            }
                            Err(NetworkError::NoRoute { .. }) => prop_assert!(oracle.is_none()),
                            Err(other) => return Err(TestCaseError::fail(format!("{other}"))),
                        }
                    }
                }
            }

            #[test]
            fn serialize_parse_round_trip(net in arb_network()) {
                prop_assert_eq!(parse_network(&net.serialize()).unwrap(), net);
            }
        }
    }
}
