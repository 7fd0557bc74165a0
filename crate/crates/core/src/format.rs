//! Line-oriented text formats for graphs, combinations, twisting
//! elements, tensors, bases and algebras.
//!
//! A graph block looks like
//!
//! ```text
//! graph mode=hairy nparity=even
//! alg V sphere3x3pt
//! alg U sphere3
//! iv 1 deco=w1
//! ev 1 deco=w
//! ev 2 deco=w
//! edge e1 i1
//! edge e2 i1
//! orient edges: 1 2
//! ```
//!
//! `iv`/`ev` lines are numbered from 1 in order. In hairy mode `deco=` on
//! an external vertex is its hair label (from `U`), everywhere else it is
//! a comma-separated list of decorations (from `V`). Odd parity uses
//! `orient halfedges: ... ivs: ...`, where edge `j` owns half-edges
//! `2j-1` (source) and `2j` (target). The orientation line lists the odd
//! tokens in the order the block means; a permuted list multiplies the
//! graph by the sign of the permutation. Writers always emit the identity.
//! Text after `#` is ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::graph::{Graph, Mode, Parity};
use crate::hairy::MCElement;
use crate::kontsevich::TensorCombo;
use crate::linalg::sparse::parse_rational;
use crate::lincombo::LinCombo;
use crate::Q;

/// Named algebras available to parsers. Builtin names resolve without
/// registration.
#[derive(Clone, Debug, Default)]
pub struct AlgebraRegistry {
    map: BTreeMap<String, GradedAlgebra>,
}

impl AlgebraRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, alg: GradedAlgebra) {
        self.map.insert(alg.name().to_string(), alg);
    }

    pub fn get(&self, name: &str) -> Result<GradedAlgebra> {
        match self.map.get(name) {
            Some(a) => Ok(a.clone()),
            None => GradedAlgebra::builtin(name),
        }
    }
}

/// A parsed graph block. `coeff` already includes the orientation sign.
#[derive(Clone, Debug)]
pub struct GraphBlock {
    pub graph: Graph,
    pub coeff: Q,
    pub deco_alg: Option<GradedAlgebra>,
    pub hair_alg: Option<GradedAlgebra>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn fmt_q(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn vname(g: &Graph, v: usize) -> String {
    if v < g.n_ext {
        format!("e{}", v + 1)
    } else {
        format!("i{}", v - g.n_ext + 1)
    }
}

/// Writes one block. Decorations are emitted grouped by vertex, internal
/// vertices first; the Koszul sign of that regrouping goes into the
/// `coeff` line, which is written only when the total coefficient is not
/// one.
pub fn write_block(g: &Graph, coeff: &Q, deco: Option<&GradedAlgebra>, hair: Option<&GradedAlgebra>) -> Result<String> {
    // file order: internal vertices first, then externals
    let mut order: Vec<usize> = (0..g.decos.len()).collect();
    order.sort_by_key(|&i| (g.decos[i].0 < g.n_ext, g.decos[i].0));
    let odd: Vec<usize> = order.iter().copied().filter(|&i| g.decos[i].1.odd).collect();
    let mut c = coeff.clone();
    if perm_sign(&odd) < 0 {
        c = -c;
    }
    let mut s = String::new();
    let mode = match g.mode {
        Mode::Kontsevich => "kontsevich",
        Mode::Hairy => "hairy",
    };
    let parity = match g.parity {
        Parity::Even => "even",
        Parity::Odd => "odd",
    };
    writeln!(s, "graph mode={mode} nparity={parity}").unwrap();
    if !c.is_one() {
        writeln!(s, "coeff {}", fmt_q(&c)).unwrap();
    }
    let need = |name: &str| Error::UnknownAlgebra(format!("no {name} algebra given for a labelled graph"));
    if !g.decos.is_empty() {
        writeln!(s, "alg V {}", deco.ok_or_else(|| need("decoration"))?.name()).unwrap();
    }
    if !g.hair_labels.is_empty() {
        writeln!(s, "alg U {}", hair.ok_or_else(|| need("hair"))?.name()).unwrap();
    }
    let decos_of = |v: usize| -> Vec<&str> {
        order.iter().filter(|&&i| g.decos[i].0 == v).map(|&i| deco.unwrap().symbol_name(g.decos[i].1.id)).collect()
    };
    for j in 0..g.n_int {
        let ds = decos_of(g.int(j));
        if ds.is_empty() {
            writeln!(s, "iv {}", j + 1).unwrap();
        } else {
            writeln!(s, "iv {} deco={}", j + 1, ds.join(",")).unwrap();
        }
    }
    for x in 0..g.n_ext {
        let ds: Vec<&str> = if g.mode == Mode::Hairy && !g.hair_labels.is_empty() {
            vec![hair.unwrap().symbol_name(g.hair_labels[x].id)]
        } else {
            decos_of(x)
        };
        if ds.is_empty() {
            writeln!(s, "ev {}", x + 1).unwrap();
        } else {
            writeln!(s, "ev {} deco={}", x + 1, ds.join(",")).unwrap();
        }
    }
    for &(a, b) in &g.edges {
        writeln!(s, "edge {} {}", vname(g, a), vname(g, b)).unwrap();
    }
    let seq = |n: usize| (1..=n).map(|i| format!(" {i}")).collect::<String>();
    match g.parity {
        Parity::Even => writeln!(s, "orient edges:{}", seq(g.n_edges())).unwrap(),
        Parity::Odd => writeln!(s, "orient halfedges:{} ivs:{}", seq(2 * g.n_edges()), seq(g.n_int)).unwrap(),
    }
    Ok(s)
}

pub fn write_graph(g: &Graph, deco: Option<&GradedAlgebra>, hair: Option<&GradedAlgebra>) -> Result<String> {
    write_block(g, &Q::one(), deco, hair)
}

/// Sign of the permutation sorting `p` (entries distinct).
fn perm_sign(p: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Strips comments and blank lines, keeping 1-based line numbers.
fn lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

/// Splits `lines` into chunks starting at each `graph` header.
fn chunks<'a>(ls: &[(usize, &'a str)]) -> Result<Vec<Vec<(usize, &'a str)>>> {
    let mut out: Vec<Vec<(usize, &str)>> = Vec::new();
    for &(n, l) in ls {
        if l.starts_with("graph ") || l == "graph" {
            out.push(vec![(n, l)]);
        } else if let Some(last) = out.last_mut() {
            last.push((n, l));
        } else {
            return Err(perr(n, "expected `graph` header"));
        }
    }
    Ok(out)
}

fn parse_vertex(tok: &str, g: &Graph, line: usize) -> Result<usize> {
    let (kind, num) = tok.split_at(1.min(tok.len()));
    let k: usize = num.parse().map_err(|_| perr(line, format!("bad vertex `{tok}`")))?;
    match kind {
        "e" if (1..=g.n_ext).contains(&k) => Ok(k - 1),
        "i" if (1..=g.n_int).contains(&k) => Ok(g.n_ext + k - 1),
        _ => Err(perr(line, format!("unknown vertex `{tok}`"))),
    }
}

fn parse_chunk(chunk: &[(usize, &str)], reg: &AlgebraRegistry) -> Result<GraphBlock> {
    let (hl, header) = chunk[0];
    let mut mode = None;
    let mut parity = None;
    for kv in header.split_whitespace().skip(1) {
        match kv.split_once('=') {
            Some(("mode", "hairy")) => mode = Some(Mode::Hairy),
            Some(("mode", "kontsevich")) => mode = Some(Mode::Kontsevich),
            Some(("nparity", "even")) => parity = Some(Parity::Even),
            Some(("nparity", "odd")) => parity = Some(Parity::Odd),
            _ => return Err(perr(hl, format!("unknown key `{kv}`"))),
        }
    }
    let mode = mode.ok_or_else(|| perr(hl, "missing mode"))?;
    let parity = parity.ok_or_else(|| perr(hl, "missing nparity"))?;

    let mut coeff = Q::one();
    let mut algs: BTreeMap<&str, GradedAlgebra> = BTreeMap::new();
    // (line, vertex-kind, number, deco list)
    let mut ivs: Vec<(usize, Vec<&str>)> = Vec::new();
    let mut evs: Vec<(usize, Vec<&str>)> = Vec::new();
    let mut edges: Vec<(usize, &str, &str)> = Vec::new();
    let mut orient: Option<(usize, &str)> = None;
    for &(n, l) in &chunk[1..] {
        let mut parts = l.split_whitespace();
        let key = parts.next().unwrap();
        let rest: Vec<&str> = parts.collect();
        if orient.is_some() {
            return Err(perr(n, "nothing may follow the orient line"));
        }
        match key {
            "coeff" => {
                if rest.len() != 1 {
                    return Err(perr(n, "expected `coeff p/q`"));
                }
                coeff = parse_rational(rest[0]).ok_or_else(|| perr(n, "bad rational"))?;
            }
            "alg" => {
                if rest.len() != 2 || !(rest[0] == "U" || rest[0] == "V") {
                    return Err(perr(n, "expected `alg U|V <name>`"));
                }
                let a = reg.get(rest[1]).map_err(|e| perr(n, e.to_string()))?;
                if algs.insert(rest[0], a).is_some() {
                    return Err(perr(n, "algebra declared twice"));
                }
            }
            "iv" | "ev" => {
                let list = if key == "iv" { &mut ivs } else { &mut evs };
                let num: usize = rest.first().and_then(|x| x.parse().ok()).ok_or_else(|| perr(n, "missing vertex number"))?;
                if num != list.len() + 1 {
                    return Err(perr(n, format!("expected {key} {}", list.len() + 1)));
                }
                let mut ds = Vec::new();
                for kv in &rest[1..] {
                    match kv.split_once('=') {
                        Some(("deco", v)) => ds.extend(v.split(',').filter(|x| !x.is_empty())),
                        _ => return Err(perr(n, format!("unknown key `{kv}`"))),
                    }
                }
                list.push((n, ds));
            }
            "edge" => {
                if rest.len() != 2 {
                    return Err(perr(n, "expected `edge <a> <b>`"));
                }
                edges.push((n, rest[0], rest[1]));
            }
            "orient" => orient = Some((n, l)),
            other => return Err(perr(n, format!("unknown key `{other}`"))),
        }
    }

    let mut g = match mode {
        Mode::Kontsevich => Graph::kontsevich(parity, evs.len(), ivs.len()),
        Mode::Hairy => Graph::hairy(parity, vec![], ivs.len()),
    };
    g.n_ext = evs.len();
    let v_alg = algs.get("V").cloned();
    let u_alg = algs.get("U").cloned();
    let deco_sym = |name: &str, n: usize| -> Result<_> {
        let a = v_alg.as_ref().ok_or_else(|| perr(n, "decoration without `alg V`"))?;
        a.sym(name).map_err(|e| perr(n, e.to_string()))
    };
    for (j, (n, ds)) in ivs.iter().enumerate() {
        for d in ds {
            g.decos.push((evs.len() + j, deco_sym(d, *n)?));
        }
    }
    let mut labels = Vec::new();
    for (x, (n, ds)) in evs.iter().enumerate() {
        if mode == Mode::Hairy {
            match ds.as_slice() {
                [] => {}
                [l] => {
                    let a = u_alg.as_ref().ok_or_else(|| perr(*n, "hair label without `alg U`"))?;
                    labels.push(a.sym(l).map_err(|e| perr(*n, e.to_string()))?);
                }
                _ => return Err(perr(*n, "a hair carries exactly one label")),
            }
        } else {
            for d in ds {
                g.decos.push((x, deco_sym(d, *n)?));
            }
        }
    }
    if mode == Mode::Hairy && !labels.is_empty() {
        if labels.len() != evs.len() {
            return Err(perr(hl, "either every hair or no hair is labelled"));
        }
        g.hair_labels = labels;
    }
    // stored in vertex order, externals first; odd decorations pay for the move
    let mut order: Vec<usize> = (0..g.decos.len()).collect();
    order.sort_by_key(|&i| g.decos[i].0);
    let odd: Vec<usize> = order.iter().copied().filter(|&i| g.decos[i].1.odd).collect();
    let deco_sign = perm_sign(&odd);
    g.decos = order.iter().map(|&i| g.decos[i]).collect();
    for &(n, a, b) in &edges {
        let (a, b) = (parse_vertex(a, &g, n)?, parse_vertex(b, &g, n)?);
        g.edges.push((a, b));
    }

    let (on, ol) = orient.ok_or_else(|| perr(chunk.last().unwrap().0, "missing orient line"))?;
    let sign = parse_orient(ol, on, &g)? * deco_sign;
    g.check_structure().map_err(|e| perr(hl, e.to_string()))?;
    if sign < 0 {
        coeff = -coeff;
    }
    Ok(GraphBlock { graph: g, coeff, deco_alg: v_alg, hair_alg: u_alg })
}

fn parse_orient(l: &str, n: usize, g: &Graph) -> Result<i32> {
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    let mut current: Option<&str> = None;
    for tok in l.split_whitespace().skip(1) {
        if let Some(name) = tok.strip_suffix(':') {
            if groups.insert(name, Vec::new()).is_some() {
                return Err(perr(n, format!("`{name}:` given twice")));
            }
            current = Some(name);
            continue;
        }
        let k: usize = tok.parse().map_err(|_| perr(n, format!("bad index `{tok}`")))?;
        let name = current.ok_or_else(|| perr(n, "index before a group name"))?;
        groups.get_mut(name).unwrap().push(k);
    }
    let expected: Vec<(&str, usize)> = match g.parity {
        Parity::Even => vec![("edges", g.n_edges())],
        Parity::Odd => vec![("halfedges", 2 * g.n_edges()), ("ivs", g.n_int)],
    };
    let mut sign = 1;
    for (name, len) in &expected {
        let seq = groups.remove(name).ok_or_else(|| perr(n, format!("missing `{name}:`")))?;
        let mut sorted = seq.clone();
        sorted.sort_unstable();
        if sorted != (1..=*len).collect::<Vec<_>>() {
            return Err(perr(n, format!("`{name}:` must list 1..{len} once each")));
        }
        sign *= perm_sign(&seq);
    }
    if let Some(k) = groups.keys().next() {
        return Err(perr(n, format!("unknown key `{k}:`")));
    }
    Ok(sign)
}

/// Parses a file holding exactly one graph block.
pub fn parse_graph(text: &str, reg: &AlgebraRegistry) -> Result<GraphBlock> {
    let ls = lines(text);
    let cs = chunks(&ls)?;
    match cs.len() {
        1 => parse_chunk(&cs[0], reg),
        0 => Err(perr(1, "no graph block")),
        _ => Err(perr(cs[1][0].0, "more than one graph block")),
    }
}

/// Parses a sequence of graph blocks.
pub fn parse_blocks(text: &str, reg: &AlgebraRegistry) -> Result<Vec<GraphBlock>> {
    chunks(&lines(text))?.iter().map(|c| parse_chunk(c, reg)).collect()
}

/// Parses blocks into a canonical combination.
pub fn parse_combo(text: &str, reg: &AlgebraRegistry) -> Result<LinCombo> {
    let mut out = LinCombo::new();
    for b in parse_blocks(text, reg)? {
        out.add_graph(&b.graph, b.coeff)?;
    }
    Ok(out)
}

pub fn write_combo(x: &LinCombo, deco: Option<&GradedAlgebra>, hair: Option<&GradedAlgebra>) -> Result<String> {
    let mut s = String::new();
    for (g, c) in x.iter() {
        s.push_str(&write_block(g, c, deco, hair)?);
    }
    Ok(s)
}

/// Twisting element file: `mc shifted_degree=<d>` and `n=<n>` header,
/// then blocks whose hairs are labelled by the element's algebra. Every
/// block carries an explicit `coeff` line.
pub fn write_mc(z: &MCElement) -> Result<String> {
    let mut s = format!("mc shifted_degree={} n={}\n", z.shifted_degree, z.n);
    for (g, c) in z.value.iter() {
        let b = write_block(g, c, None, Some(&z.algebra))?;
        if b.lines().nth(1).map_or(true, |l| !l.starts_with("coeff ")) {
            let (head, tail) = b.split_once('\n').unwrap();
            writeln!(s, "{head}\ncoeff 1/1").unwrap();
            s.push_str(tail);
        } else {
            s.push_str(&b);
        }
    }
    Ok(s)
}

pub fn parse_mc(text: &str, reg: &AlgebraRegistry) -> Result<MCElement> {
    let ls = lines(text);
    let (hl, header) = *ls.first().ok_or_else(|| perr(1, "empty file"))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("mc") {
        return Err(perr(hl, "expected `mc shifted_degree=<d> n=<n>`"));
    }
    let (mut sd, mut n) = (None, None);
    for kv in parts {
        match kv.split_once('=') {
            Some(("shifted_degree", v)) => sd = Some(v.parse::<i32>().map_err(|_| perr(hl, "bad degree"))?),
            Some(("n", v)) => n = Some(v.parse::<i32>().map_err(|_| perr(hl, "bad n"))?),
            _ => return Err(perr(hl, format!("unknown key `{kv}`"))),
        }
    }
    let sd = sd.ok_or_else(|| perr(hl, "missing shifted_degree"))?;
    let n = n.ok_or_else(|| perr(hl, "missing n"))?;
    let cs = chunks(&ls[1..])?;
    let mut value = LinCombo::new();
    let mut alg: Option<GradedAlgebra> = None;
    for c in &cs {
        if !c.iter().any(|(_, l)| l.starts_with("coeff ")) {
            return Err(perr(c[0].0, "every block of a twisting element needs a `coeff` line"));
        }
        let b = parse_chunk(c, reg)?;
        let a = b.hair_alg.clone().ok_or_else(|| perr(c[0].0, "twisting element hairs need `alg U`"))?;
        if alg.as_ref().is_some_and(|x| x.name() != a.name()) {
            return Err(perr(c[0].0, "blocks use different algebras"));
        }
        alg = Some(a);
        value.add_graph(&b.graph, b.coeff)?;
    }
    let alg = alg.ok_or_else(|| perr(hl, "no graph blocks"))?;
    let z = MCElement::new(value, alg, n).map_err(|e| perr(hl, e.to_string()))?;
    if z.shifted_degree != sd {
        return Err(perr(hl, format!("header says shifted degree {sd}, blocks have {}", z.shifted_degree)));
    }
    Ok(z)
}

/// Tensor file: each term is `term p/q`, the left block, a `⊗` line and
/// the right block.
pub fn write_tensor(t: &TensorCombo, deco: Option<&GradedAlgebra>) -> Result<String> {
    let mut s = String::new();
    for ((a, b), c) in t {
        writeln!(s, "term {}", fmt_q(c)).unwrap();
        s.push_str(&write_graph(a, deco, None)?);
        s.push_str("⊗\n");
        s.push_str(&write_graph(b, deco, None)?);
    }
    Ok(s)
}

pub fn parse_tensor(text: &str, reg: &AlgebraRegistry) -> Result<TensorCombo> {
    let ls = lines(text);
    let mut out = TensorCombo::new();
    let mut i = 0;
    while i < ls.len() {
        let (n, l) = ls[i];
        let c = l
            .strip_prefix("term ")
            .and_then(|x| parse_rational(x.trim()))
            .ok_or_else(|| perr(n, "expected `term p/q`"))?;
        let sep = (i + 1..ls.len()).find(|&j| ls[j].1 == "⊗").ok_or_else(|| perr(n, "missing `⊗` line"))?;
        let end = (sep + 1..ls.len()).find(|&j| ls[j].1.starts_with("term ")).unwrap_or(ls.len());
        let left = parse_chunk_exact(&ls[i + 1..sep], reg, n)?;
        let right = parse_chunk_exact(&ls[sep + 1..end], reg, ls[sep].0)?;
        let (ga, sa) = crate::canon::canonicalize(&left.graph)?;
        let (gb, sb) = crate::canon::canonicalize(&right.graph)?;
        let coeff = c * &left.coeff * &right.coeff * Q::from_integer((sa * sb).into());
        if !coeff.is_zero() {
            *out.entry((ga, gb)).or_insert_with(Q::zero) += coeff;
        }
        i = end;
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

fn parse_chunk_exact(ls: &[(usize, &str)], reg: &AlgebraRegistry, near: usize) -> Result<GraphBlock> {
    let cs = chunks(ls)?;
    if cs.len() != 1 {
        return Err(perr(near, "expected exactly one graph block"));
    }
    parse_chunk(&cs[0], reg)
}

/// Basis file: `index <k>` before each block, counting from 0.
pub fn write_basis(b: &[Graph], deco: Option<&GradedAlgebra>, hair: Option<&GradedAlgebra>) -> Result<String> {
    let mut s = String::new();
    for (k, g) in b.iter().enumerate() {
        writeln!(s, "index {k}").unwrap();
        s.push_str(&write_graph(g, deco, hair)?);
    }
    Ok(s)
}

pub fn parse_basis(text: &str, reg: &AlgebraRegistry) -> Result<Vec<Graph>> {
    let ls = lines(text);
    let mut out = Vec::new();
    let mut i = 0;
    while i < ls.len() {
        let (n, l) = ls[i];
        let k: usize = l
            .strip_prefix("index ")
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| perr(n, "expected `index <k>`"))?;
        if k != out.len() {
            return Err(perr(n, format!("expected index {}", out.len())));
        }
        let end = (i + 1..ls.len()).find(|&j| ls[j].1.starts_with("index ")).unwrap_or(ls.len());
        let b = parse_chunk_exact(&ls[i + 1..end], reg, n)?;
        if !b.coeff.is_one() {
            return Err(perr(n, "basis elements carry no coefficient"));
        }
        out.push(b.graph);
        i = end;
    }
    Ok(out)
}

/// Algebra source file:
///
/// ```text
/// algebra koszul
/// symbol 1 0
/// symbol x 1
/// symbol y 2
/// unit 1
/// mul x x y 1      # x*x = 1 y (one line per term)
/// d x y 1          # d(x) = 1 y
/// ```
pub fn parse_algebra(text: &str) -> Result<GradedAlgebra> {
    let mut name = None;
    let mut symbols: Vec<(String, i32)> = Vec::new();
    let mut unit = None;
    let mut mult: Vec<(String, String, String, i64)> = Vec::new();
    let mut diff: Vec<(String, String, i64)> = Vec::new();
    let mut last = 1;
    for (n, l) in lines(text) {
        last = n;
        let p: Vec<&str> = l.split_whitespace().collect();
        let int = |s: &str| s.parse::<i64>().map_err(|_| perr(n, format!("bad integer `{s}`")));
        match p.as_slice() {
            ["algebra", x] => name = Some(x.to_string()),
            ["symbol", s, d] => symbols.push((s.to_string(), int(d)? as i32)),
            ["unit", s] => unit = Some(s.to_string()),
            ["mul", a, b, c, k] => mult.push((a.to_string(), b.to_string(), c.to_string(), int(k)?)),
            ["d", a, b, k] => diff.push((a.to_string(), b.to_string(), int(k)?)),
            _ => return Err(perr(n, format!("unrecognised line `{l}`"))),
        }
    }
    let name = name.ok_or_else(|| perr(1, "missing `algebra <name>`"))?;
    let unit = unit.ok_or_else(|| perr(last, "missing `unit`"))?;
    let syms: Vec<(&str, i32)> = symbols.iter().map(|(s, d)| (s.as_str(), *d)).collect();
    // group product and differential terms
    let mut mgroups: BTreeMap<(&str, &str), Vec<(&str, i64)>> = BTreeMap::new();
    for (a, b, c, k) in &mult {
        mgroups.entry((a.as_str(), b.as_str())).or_default().push((c.as_str(), *k));
    }
    let mut dgroups: BTreeMap<&str, Vec<(&str, i64)>> = BTreeMap::new();
    for (a, b, k) in &diff {
        dgroups.entry(a.as_str()).or_default().push((b.as_str(), *k));
    }
    let m: Vec<(&str, &str, &[(&str, i64)])> = mgroups.iter().map(|((a, b), v)| (*a, *b, v.as_slice())).collect();
    let d: Vec<(&str, &[(&str, i64)])> = dgroups.iter().map(|(a, v)| (*a, v.as_slice())).collect();
    let alg = GradedAlgebra::new(&name, &syms, &unit, &m, &d)?;
    alg.validate()?;
    Ok(alg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_round_trip() {
        let g = Graph::kontsevich(Parity::Even, 0, 0);
        let t = write_graph(&g, None, None).unwrap();
        assert_eq!(t, "graph mode=kontsevich nparity=even\norient edges:\n");
        let b = parse_graph(&t, &AlgebraRegistry::new()).unwrap();
        assert_eq!(b.graph, g);
        assert_eq!(write_graph(&b.graph, None, None).unwrap(), t);
    }

    #[test]
    fn unknown_key_names_the_line() {
        let t = "graph mode=kontsevich nparity=even\nev 1 frob=1\norient edges:\n";
        let e = parse_graph(t, &AlgebraRegistry::new()).unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, msg: "unknown key `frob=1`".into() });
    }

    #[test]
    fn permuted_orientation_flips_sign() {
        let t = "graph mode=kontsevich nparity=even\niv 1\nev 1\nev 2\nedge e1 i1\nedge e2 i1\norient edges: 2 1\n";
        let b = parse_graph(t, &AlgebraRegistry::new()).unwrap();
        assert_eq!(b.coeff, -Q::one());
    }

    #[test]
    fn algebra_file() {
        let a = parse_algebra("algebra k2\nsymbol 1 0\nsymbol x 1\nsymbol y 2\nunit 1\nd x y 1\n").unwrap();
        assert_eq!(a.dim(), 3);
        assert!(a.has_differential());
        assert!(matches!(parse_algebra("algebra a\nsymbol 1 0\nunit 1\nbogus\n"), Err(Error::Parse { line: 4, .. })));
    }
}
