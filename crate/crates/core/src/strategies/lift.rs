use std::collections::VecDeque;

use super::{AdversaryStrategy, AgentsStrategy};
use crate::error::{Error, Result};
use crate::game::{GameState, MoveVector, SpanningChoice};
use crate::graph::{cut_vertices, ContractionMap, Edge, Graph, Vertex};

/// Runs a block strategy on a graph with a cut vertex `v`, pretending every
/// agent outside the block sits on `v`. Outside the block a fixed spanning
/// tree is always played.
#[derive(Clone)]
pub struct CutVertexLift {
    inner: Box<dyn AdversaryStrategy>,
    block: Graph,
    local_to_global: Vec<Vertex>,
    local: Vec<Option<Vertex>>,
    v: Vertex,
    outside_tree: Vec<Edge>,
}

/// `block_vertices` may or may not list `v`; the block is induced on
/// `block_vertices ∪ {v}` and relabelled in increasing vertex order.
pub fn cut_vertex_lift(
    inner: Box<dyn AdversaryStrategy>,
    h: &Graph,
    block_vertices: &[Vertex],
    v: Vertex,
) -> Result<CutVertexLift> {
    h.check_vertex(v)?;
    if !cut_vertices(h)?.contains(&v) {
        return Err(Error::Precondition(format!(
            "vertex {v} is not a cut vertex"
        )));
    }
    let n = h.vertex_count();
    let mut members: Vec<Vertex> = block_vertices.to_vec();
    members.push(v);
    members.sort_unstable();
    members.dedup();
    for &w in &members {
        h.check_vertex(w)?;
    }
    let mut in_block = vec![false; n];
    for &w in &members {
        in_block[w] = true;
    }
    if members.len() == n {
        return Err(Error::Precondition(
            "block must leave something outside".into(),
        ));
    }
    if let Some(&(a, b)) = h
        .edges()
        .iter()
        .find(|&&(a, b)| in_block[a] != in_block[b] && a != v && b != v)
    {
        return Err(Error::Precondition(format!(
            "edge ({a}, {b}) joins the block to the outside away from {v}"
        )));
    }
    let (block, local_to_global) = h.induced(&members);
    block.require_connected()?;
    let mut local = vec![None; n];
    for (i, &w) in local_to_global.iter().enumerate() {
        local[w] = Some(i);
    }
    // BFS tree from v over the outside vertices
    let mut seen = in_block.clone();
    let mut outside_tree = Vec::new();
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for &w in h.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                outside_tree.push((u, w));
                queue.push_back(w);
            }
        }
    }
    Ok(CutVertexLift {
        inner,
        block,
        local_to_global,
        local,
        v,
        outside_tree,
    })
}

impl CutVertexLift {
    /// The state as the block strategy sees it.
    pub fn project(&self, s: &GameState) -> GameState {
        let lv = self.local[self.v].expect("v is in the block");
        s.map_vertices(|w| self.local[w].unwrap_or(lv))
    }

    pub fn block(&self) -> &Graph {
        &self.block
    }

    pub fn block_members(&self) -> &[Vertex] {
        &self.local_to_global
    }
}

impl AdversaryStrategy for CutVertexLift {
    fn name(&self) -> String {
        format!("cutlift:{}({})", self.v, self.inner.name())
    }

    fn choose(&mut self, g: &Graph, s: &GameState) -> Result<SpanningChoice> {
        let c = self.inner.choose(&self.block, &self.project(s))?;
        let mut edges: Vec<Edge> = c
            .edges(&self.block)
            .into_iter()
            .map(|(a, b)| (self.local_to_global[a], self.local_to_global[b]))
            .collect();
        edges.extend_from_slice(&self.outside_tree);
        SpanningChoice::from_edges(g, &edges)
    }

    fn phase(&self) -> Vec<u64> {
        self.inner.phase()
    }

    fn designated_placement(&self, _g: &Graph, k: usize) -> Option<GameState> {
        self.inner
            .designated_placement(&self.block, k)
            .map(|s| s.map_vertices(|w| self.local_to_global[w]))
    }

    fn box_clone(&self) -> Box<dyn AdversaryStrategy> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Tracked {
    knowledgeable: bool,
    pos: Vertex,
    target: Vertex,
}

impl Tracked {
    fn slot_key(&self) -> (bool, Vertex) {
        (!self.knowledgeable, self.pos)
    }
}

/// Knowledge update on tracked agents, same rule as the game engine.
fn advance(agents: &mut [Tracked], dest: &[Vertex]) {
    let k_dest: Vec<Vertex> = agents
        .iter()
        .zip(dest)
        .filter(|(a, _)| a.knowledgeable)
        .map(|(_, &d)| d)
        .collect();
    for (a, &d) in agents.iter_mut().zip(dest) {
        a.pos = d;
        a.knowledgeable |= k_dest.contains(&d);
    }
}

fn encode(agents: &[Tracked]) -> Vec<u64> {
    let mut sorted = agents.to_vec();
    sorted.sort();
    sorted
        .iter()
        .map(|a| ((a.pos as u64) << 33) | ((a.target as u64) << 1) | a.knowledgeable as u64)
        .collect()
}

/// Plays a strategy for `g` on its bridge contraction `h`. A shadow copy of
/// the game on `g` is kept; moves along contracted edges become holds.
#[derive(Clone)]
pub struct ContractLiftAgents {
    inner: Box<dyn AgentsStrategy>,
    g: Graph,
    map: ContractionMap,
    shadow: Option<Vec<Tracked>>,
}

pub fn contract_lift_agents(
    inner: Box<dyn AgentsStrategy>,
    g: &Graph,
    h: &Graph,
    map: &ContractionMap,
) -> Result<ContractLiftAgents> {
    map.validate(g, h)?;
    Ok(ContractLiftAgents {
        inner,
        g: g.clone(),
        map: map.clone(),
        shadow: None,
    })
}

impl ContractLiftAgents {
    /// Assigns shadow agents to the slots of `s`, or `None` if the shadow
    /// does not fit.
    fn assign(&self, s: &GameState) -> Option<Vec<usize>> {
        let shadow = self.shadow.as_ref()?;
        if shadow.len() != s.agent_count() {
            return None;
        }
        let k = s.knowledgeable().len();
        let slots = s.slots();
        let mut used = vec![false; shadow.len()];
        let mut out = vec![usize::MAX; slots.len()];
        // ignorant slots need ignorant shadows; knowledgeable slots take any
        for pass_ignorant in [true, false] {
            for (slot, &p) in slots.iter().enumerate() {
                if (slot >= k) != pass_ignorant {
                    continue;
                }
                let pick = (0..shadow.len())
                    .filter(|&a| !used[a] && self.map.project(shadow[a].pos) == p)
                    .filter(|&a| !pass_ignorant || !shadow[a].knowledgeable)
                    .min_by_key(|&a| !shadow[a].knowledgeable)?;
                used[pick] = true;
                out[slot] = pick;
            }
        }
        Some(out)
    }

    fn reset(&mut self, s: &GameState) {
        let k = s.knowledgeable().len();
        let rep = |p: Vertex| self.map.members(p)[0];
        self.shadow = Some(
            s.slots()
                .into_iter()
                .enumerate()
                .map(|(slot, p)| Tracked {
                    knowledgeable: slot < k,
                    pos: rep(p),
                    target: 0,
                })
                .collect(),
        );
    }
}

impl AgentsStrategy for ContractLiftAgents {
    fn name(&self) -> String {
        format!("contract({})", self.inner.name())
    }

    fn moves(&mut self, h: &Graph, s: &GameState, choice: &SpanningChoice) -> Result<MoveVector> {
        let assignment = match self.assign(s) {
            Some(a) => a,
            None => {
                self.reset(s);
                self.assign(s).expect("fresh shadow matches")
            }
        };
        let mut g_edges: Vec<Edge> = choice
            .edges(h)
            .into_iter()
            .map(|(a, b)| {
                self.map
                    .source_edge(&self.g, a, b)
                    .ok_or_else(|| Error::Precondition(format!("no source edge for ({a}, {b})")))
            })
            .collect::<Result<_>>()?;
        g_edges.extend_from_slice(&self.map.contracted);
        let g_choice = SpanningChoice::from_edges(&self.g, &g_edges)?;
        let shadow = self.shadow.as_mut().expect("assigned");
        // canonical slot order of the shadow state
        let mut order: Vec<usize> = (0..shadow.len()).collect();
        order.sort_by_key(|&a| shadow[a].slot_key());
        let g_state = GameState::new(
            shadow
                .iter()
                .filter(|a| a.knowledgeable)
                .map(|a| a.pos)
                .collect(),
            shadow
                .iter()
                .filter(|a| !a.knowledgeable)
                .map(|a| a.pos)
                .collect(),
        );
        let mv = self.inner.moves(&self.g, &g_state, &g_choice)?;
        crate::game::apply_moves(&self.g, &g_state, &g_choice, &mv)?;
        let mut dest = vec![0; shadow.len()];
        for (slot, &a) in order.iter().enumerate() {
            dest[a] = mv.0[slot];
        }
        let out = MoveVector(
            assignment
                .iter()
                .map(|&a| self.map.project(dest[a]))
                .collect(),
        );
        advance(shadow, &dest);
        Ok(out)
    }

    fn phase(&self) -> Vec<u64> {
        let mut p = match &self.shadow {
            Some(sh) => encode(sh),
            None => vec![u64::MAX],
        };
        p.push(u64::MAX - 1);
        p.extend(self.inner.phase());
        p
    }

    fn box_clone(&self) -> Box<dyn AgentsStrategy> {
        Box::new(self.clone())
    }
}

/// Plays a strategy for the contraction `h` on the original graph `g`, one
/// `h`-round per block of `c` rounds. At a block start every agent gets its
/// target class from the `h` strategy; during the block it walks the
/// contracted bridges to the crossing point and crosses once the crossing
/// edge is present. Agents already in their target class hold.
#[derive(Clone)]
pub struct ExpandLiftAgents {
    inner: Box<dyn AgentsStrategy>,
    h: Graph,
    map: ContractionMap,
    block_len: usize,
    step: usize,
    tracked: Option<Vec<Tracked>>,
}

pub fn expand_lift_agents(
    inner: Box<dyn AgentsStrategy>,
    g: &Graph,
    h: &Graph,
    map: &ContractionMap,
    c: usize,
) -> Result<ExpandLiftAgents> {
    map.validate(g, h)?;
    if c != map.contracted.len() {
        return Err(Error::Precondition(format!(
            "block length {c} differs from {} contracted edges",
            map.contracted.len()
        )));
    }
    Ok(ExpandLiftAgents {
        inner,
        h: h.clone(),
        map: map.clone(),
        block_len: c.max(1),
        step: 0,
        tracked: None,
    })
}

impl ExpandLiftAgents {
    fn matches(&self, s: &GameState) -> bool {
        let Some(t) = &self.tracked else { return false };
        let k: Vec<Vertex> = t
            .iter()
            .filter(|a| a.knowledgeable)
            .map(|a| a.pos)
            .collect();
        let i: Vec<Vertex> = t
            .iter()
            .filter(|a| !a.knowledgeable)
            .map(|a| a.pos)
            .collect();
        GameState::new(k, i) == *s
    }

    fn start_block(&mut self, g: &Graph, s: &GameState, choice: &SpanningChoice) -> Result<()> {
        let k = s.knowledgeable().len();
        let slots = s.slots();
        let proj: Vec<Vertex> = slots.iter().map(|&v| self.map.project(v)).collect();
        let h_state = GameState::new(proj[..k].to_vec(), proj[k..].to_vec());
        let h_edges: Vec<Edge> = choice
            .edges(g)
            .into_iter()
            .filter(|&(a, b)| !self.map.is_contracted(a, b))
            .map(|(a, b)| (self.map.project(a), self.map.project(b)))
            .collect();
        let h_choice = SpanningChoice::from_edges(&self.h, &h_edges)?;
        let mv = self.inner.moves(&self.h, &h_state, &h_choice)?;
        // h slot of each g slot: stable sort within each knowledge class
        let mut targets = vec![0; slots.len()];
        for (lo, hi) in [(0, k), (k, slots.len())] {
            let mut idx: Vec<usize> = (lo..hi).collect();
            idx.sort_by_key(|&i| proj[i]);
            for (j, &i) in idx.iter().enumerate() {
                targets[i] = mv.0[lo + j];
            }
        }
        self.tracked = Some(
            slots
                .iter()
                .zip(&targets)
                .enumerate()
                .map(|(slot, (&pos, &target))| Tracked {
                    knowledgeable: slot < k,
                    pos,
                    target,
                })
                .collect(),
        );
        self.step = 0;
        Ok(())
    }

    /// Next vertex for an agent at `w` heading to class `target`. Agents
    /// staying in their class gather at its smallest member.
    fn next_hop(
        &self,
        g: &Graph,
        choice: &SpanningChoice,
        w: Vertex,
        target: Vertex,
    ) -> Result<Vertex> {
        let here = self.map.project(w);
        let members = self.map.members(here);
        let goal = if here == target {
            members[0]
        } else {
            let (a, b) = self.map.source_edge(g, here, target).ok_or_else(|| {
                Error::Precondition(format!("classes {here} and {target} are not adjacent"))
            })?;
            if w == a {
                return Ok(if choice.has_edge(g, a, b) { b } else { w });
            }
            a
        };
        if w == goal {
            return Ok(w);
        }
        // walk the contracted tree of this class toward `goal`
        let mut parent = vec![usize::MAX; g.vertex_count()];
        parent[goal] = goal;
        let mut queue = VecDeque::from([goal]);
        while let Some(u) = queue.pop_front() {
            for &x in g.neighbors(u) {
                if parent[x] == usize::MAX && members.binary_search(&x).is_ok() {
                    parent[x] = u;
                    queue.push_back(x);
                }
            }
        }
        Ok(parent[w])
    }
}

impl AgentsStrategy for ExpandLiftAgents {
    fn name(&self) -> String {
        format!("expand({})", self.inner.name())
    }

    fn moves(&mut self, g: &Graph, s: &GameState, choice: &SpanningChoice) -> Result<MoveVector> {
        if self.step >= self.block_len || !self.matches(s) {
            self.start_block(g, s, choice)?;
        }
        let mut agents = self.tracked.take().expect("block started");
        agents.sort_by_key(Tracked::slot_key);
        let dest: Vec<Vertex> = agents
            .iter()
            .map(|a| self.next_hop(g, choice, a.pos, a.target))
            .collect::<Result<_>>()?;
        advance(&mut agents, &dest);
        self.tracked = Some(agents);
        self.step += 1;
        Ok(MoveVector(dest))
    }

    fn phase(&self) -> Vec<u64> {
        let mut p = vec![self.step as u64];
        match &self.tracked {
            Some(t) => p.extend(encode(t)),
            None => p.push(u64::MAX),
        }
        p.push(u64::MAX - 1);
        p.extend(self.inner.phase());
        p
    }

    fn box_clone(&self) -> Box<dyn AgentsStrategy> {
        Box::new(self.clone())
    }
}
