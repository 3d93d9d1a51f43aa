//! S-expression catalog language: parsing, validation and canonical rendering
//! of relation schemas.
//!
//! ```text
//! catalog  := entry*
//! entry    := (relation ID params [(level lie|assoc)] [(tag informational)] [guard] equation)
//!           | (unstated ID "reason")
//! params   := ((NAME kind)*)            kind := node | mode | pm | (range E E)
//! guard    := (guard pred)
//! pred     := true | false | (even e) | (odd e) | (eq e e) | (ne e e) | (lt e e) | (le e e)
//!           | (tuplene (e e) (e e)) | (cartan e e INT) | (and pred+) | (or pred+) | (not pred)
//! equation := (= expr expr)
//! expr     := 0 | gen | chain | (lb expr expr) | (* expr expr) | (+ expr+) | (scal coeff expr)
//!           | (sign e expr) | (mul k expr) | (when pred expr)
//! gen      := (H e e) | (X+ e e) | (X- e e) | (X s e e)      ; s a pm parameter
//! chain    := (Xp e e e) | (Xm e e e) | (Xd e e) | (Yp e e e) | (Ym e e e) | (Yd e e)
//! coeff    := (c RAT [(hb INT)] [(nlin INT INT)])
//! k        := e | (a e e) | (ar e e e) | (delta e e)
//! e        := INT | NAME | n | (+ e+) | (- e) | (- e e+) | (* INT e)
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write};

use crate::error::{Result, TydError};
use crate::liealg::GenKind;
use crate::scalars::Rational;

// ---------------------------------------------------------------------------
// S-expressions

#[derive(Clone, Debug)]
pub enum Sexp {
    Atom(String, usize, usize),
    Str(String, usize, usize),
    List(Vec<Sexp>, usize, usize),
}

impl Sexp {
    fn pos(&self) -> (usize, usize) {
        match self {
            Sexp::Atom(_, l, c) | Sexp::Str(_, l, c) | Sexp::List(_, l, c) => (*l, *c),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.pos();
        Err(TydError::Parse { line, col, msg: msg.into() })
    }

    fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a, ..) => Some(a),
            _ => None,
        }
    }

    fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(v, ..) => Some(v),
            _ => None,
        }
    }

    fn head(&self) -> Option<(&str, &[Sexp])> {
        let v = self.list()?;
        let h = v.first()?.atom()?;
        Some((h, &v[1..]))
    }
}

pub fn read_sexps(text: &str) -> Result<Vec<Sexp>> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    let (mut line, mut col) = (1usize, 1usize);
    let mut stack: Vec<(Vec<Sexp>, usize, usize)> = Vec::new();
    let mut top: Vec<Sexp> = Vec::new();
    let advance = |c: char, line: &mut usize, col: &mut usize| {
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while pos < chars.len() {
        let c = chars[pos];
        match c {
            ';' => {
                while pos < chars.len() && chars[pos] != '\n' {
                    advance(chars[pos], &mut line, &mut col);
                    pos += 1;
                }
            }
            '(' => {
                stack.push((Vec::new(), line, col));
                advance(c, &mut line, &mut col);
                pos += 1;
            }
            ')' => {
                let Some((items, l, cc)) = stack.pop() else {
                    return Err(TydError::Parse { line, col, msg: "unbalanced ')'".into() });
                };
                let node = Sexp::List(items, l, cc);
                match stack.last_mut() {
                    Some(parent) => parent.0.push(node),
                    None => top.push(node),
                }
                advance(c, &mut line, &mut col);
                pos += 1;
            }
            '"' => {
                let (l, cc) = (line, col);
                advance(c, &mut line, &mut col);
                pos += 1;
                let mut s = String::new();
                while pos < chars.len() && chars[pos] != '"' {
                    s.push(chars[pos]);
                    advance(chars[pos], &mut line, &mut col);
                    pos += 1;
                }
                if pos >= chars.len() {
                    return Err(TydError::Parse { line: l, col: cc, msg: "unterminated string".into() });
                }
                advance('"', &mut line, &mut col);
                pos += 1;
                let node = Sexp::Str(s, l, cc);
                match stack.last_mut() {
                    Some(parent) => parent.0.push(node),
                    None => top.push(node),
                }
            }
            c if c.is_whitespace() => {
                advance(c, &mut line, &mut col);
                pos += 1;
            }
            _ => {
                let (l, cc) = (line, col);
                let mut s = String::new();
                while pos < chars.len() {
                    let d = chars[pos];
                    if d.is_whitespace() || d == '(' || d == ')' || d == ';' || d == '"' {
                        break;
                    }
                    s.push(d);
                    advance(d, &mut line, &mut col);
                    pos += 1;
                }
                let node = Sexp::Atom(s, l, cc);
                match stack.last_mut() {
                    Some(parent) => parent.0.push(node),
                    None => top.push(node),
                }
            }
        }
    }
    if let Some((_, l, c)) = stack.last() {
        return Err(TydError::Parse { line: *l, col: *c, msg: "unclosed '('".into() });
    }
    Ok(top)
}

// ---------------------------------------------------------------------------
// Schema AST

/// Integer-linear expression `c + nc·n + Σ coeff·param`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Lin {
    pub c: i64,
    pub nc: i64,
    pub terms: BTreeMap<usize, i64>,
}

impl Lin {
    pub fn constant(c: i64) -> Self {
        Lin { c, ..Default::default() }
    }

    pub fn param(p: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p, 1);
        Lin { terms, ..Default::default() }
    }

    fn add(&self, o: &Lin, k: i64) -> Lin {
        let mut out = self.clone();
        out.c += k * o.c;
        out.nc += k * o.nc;
        for (p, v) in &o.terms {
            *out.terms.entry(*p).or_insert(0) += k * v;
        }
        out.terms.retain(|_, v| *v != 0);
        out
    }

    fn times(&self, k: i64) -> Lin {
        Lin::default().add(self, k)
    }

    pub fn eval(&self, vals: &[i64], n: i32) -> i64 {
        self.c + self.nc * n as i64 + self.terms.iter().map(|(p, k)| k * vals[*p]).sum::<i64>()
    }

    fn max_param(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RangeKind {
    Node,
    Mode,
    Pm,
    Range(Lin, Lin),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub kind: RangeKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pred {
    True,
    False,
    Even(Lin),
    Odd(Lin),
    Eq(Lin, Lin),
    Ne(Lin, Lin),
    Lt(Lin, Lin),
    Le(Lin, Lin),
    TupleNe((Lin, Lin), (Lin, Lin)),
    Cartan(Lin, Lin, i64),
    And(Vec<Pred>),
    Or(Vec<Pred>),
    Not(Box<Pred>),
}

/// `rat · ħ^hb · (a·n + b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coeff {
    pub rat: Rational,
    pub hb: u32,
    pub nlin: Option<(i64, i64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenSel {
    Fixed(GenKind),
    /// X^± selected by a pm parameter.
    Signed(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainFamily {
    Xp,
    Xm,
    Xd,
    Yp,
    Ym,
    Yd,
}

impl ChainFamily {
    pub fn label(self) -> &'static str {
        match self {
            ChainFamily::Xp => "Xp",
            ChainFamily::Xm => "Xm",
            ChainFamily::Xd => "Xd",
            ChainFamily::Yp => "Yp",
            ChainFamily::Ym => "Ym",
            ChainFamily::Yd => "Yd",
        }
    }

    fn from_label(s: &str) -> Option<Self> {
        Some(match s {
            "Xp" => ChainFamily::Xp,
            "Xm" => ChainFamily::Xm,
            "Xd" => ChainFamily::Xd,
            "Yp" => ChainFamily::Yp,
            "Ym" => ChainFamily::Ym,
            "Yd" => ChainFamily::Yd,
            _ => return None,
        })
    }

    pub fn is_diagonal(self) -> bool {
        matches!(self, ChainFamily::Xd | ChainFamily::Yd)
    }

    pub fn mirror(self) -> Self {
        match self {
            ChainFamily::Xp => ChainFamily::Yp,
            ChainFamily::Xm => ChainFamily::Ym,
            ChainFamily::Xd => ChainFamily::Yd,
            ChainFamily::Yp => ChainFamily::Xp,
            ChainFamily::Ym => ChainFamily::Xm,
            ChainFamily::Yd => ChainFamily::Xd,
        }
    }
}

/// Integer factor for `mul`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntTerm {
    Lin(Lin),
    Cartan(Lin, Lin),
    CartanR(Lin, Lin, Lin),
    Delta(Lin, Lin),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Zero,
    Gen(GenSel, Lin, Lin),
    /// Chain family with (i, j, r); diagonal families ignore j.
    Chain(ChainFamily, Lin, Lin, Lin),
    Bracket(Box<Expr>, Box<Expr>),
    Prod(Box<Expr>, Box<Expr>),
    Sum(Vec<Expr>),
    Scal(Coeff, Box<Expr>),
    Sign(Lin, Box<Expr>),
    Mul(IntTerm, Box<Expr>),
    When(Pred, Box<Expr>),
}

impl Expr {
    fn has_prod(&self) -> bool {
        match self {
            Expr::Prod(..) => true,
            Expr::Bracket(a, b) => a.has_prod() || b.has_prod(),
            Expr::Sum(v) => v.iter().any(Expr::has_prod),
            Expr::Scal(_, e) | Expr::Sign(_, e) | Expr::Mul(_, e) | Expr::When(_, e) => e.has_prod(),
            _ => false,
        }
    }

    fn has_chain(&self) -> bool {
        match self {
            Expr::Chain(..) => true,
            Expr::Bracket(a, b) | Expr::Prod(a, b) => a.has_chain() || b.has_chain(),
            Expr::Sum(v) => v.iter().any(Expr::has_chain),
            Expr::Scal(_, e) | Expr::Sign(_, e) | Expr::Mul(_, e) | Expr::When(_, e) => e.has_chain(),
            _ => false,
        }
    }

    /// Swaps X^+ ↔ X^− and positive ↔ negative chain families.
    pub fn mirror(&self) -> Expr {
        match self {
            Expr::Zero => Expr::Zero,
            Expr::Gen(GenSel::Fixed(k), i, r) => {
                let k = match k {
                    GenKind::XPlus => GenKind::XMinus,
                    GenKind::XMinus => GenKind::XPlus,
                    GenKind::H => GenKind::H,
                };
                Expr::Gen(GenSel::Fixed(k), i.clone(), r.clone())
            }
            Expr::Gen(sel, i, r) => Expr::Gen(*sel, i.clone(), r.clone()),
            Expr::Chain(f, i, j, r) => Expr::Chain(f.mirror(), i.clone(), j.clone(), r.clone()),
            Expr::Bracket(a, b) => Expr::Bracket(Box::new(a.mirror()), Box::new(b.mirror())),
            Expr::Prod(a, b) => Expr::Prod(Box::new(a.mirror()), Box::new(b.mirror())),
            Expr::Sum(v) => Expr::Sum(v.iter().map(Expr::mirror).collect()),
            Expr::Scal(c, e) => Expr::Scal(c.clone(), Box::new(e.mirror())),
            Expr::Sign(l, e) => Expr::Sign(l.clone(), Box::new(e.mirror())),
            Expr::Mul(k, e) => Expr::Mul(k.clone(), Box::new(e.mirror())),
            Expr::When(p, e) => Expr::When(p.clone(), Box::new(e.mirror())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Lie,
    Assoc,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationSchema {
    pub id: String,
    pub params: Vec<Param>,
    pub level: Level,
    pub informational: bool,
    pub guard: Pred,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl RelationSchema {
    /// The negative-root mirror of a schema (X^+ ↔ X^−, chain transposition).
    pub fn mirror(&self) -> RelationSchema {
        RelationSchema {
            id: format!("{}~mirror", self.id),
            params: self.params.clone(),
            level: self.level,
            informational: self.informational,
            guard: self.guard.clone(),
            lhs: self.lhs.mirror(),
            rhs: self.rhs.mirror(),
        }
    }

    pub fn uses_chains(&self) -> bool {
        self.lhs.has_chain() || self.rhs.has_chain()
    }
}

/// A catalog item: either a checkable schema or an entry that cannot be
/// stated as an equation and is reported as skipped.
#[derive(Clone, Debug, PartialEq)]
pub enum CatalogEntry {
    Relation(RelationSchema),
    Unstated { id: String, reason: String },
}

impl CatalogEntry {
    pub fn id(&self) -> &str {
        match self {
            CatalogEntry::Relation(s) => &s.id,
            CatalogEntry::Unstated { id, .. } => id,
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing

const RESERVED: &[&str] = &["n", "a", "ar", "delta"];

struct Scope<'a> {
    names: &'a [Param],
}

impl Scope<'_> {
    fn lookup(&self, s: &Sexp, name: &str) -> Result<usize> {
        match self.names.iter().position(|p| p.name == name) {
            Some(i) => Ok(i),
            None => s.err(format!("unbound parameter '{name}'")),
        }
    }
}

fn parse_int(s: &Sexp) -> Result<i64> {
    match s.atom().and_then(|a| a.parse::<i64>().ok()) {
        Some(v) => Ok(v),
        None => s.err("expected integer"),
    }
}

fn parse_lin(s: &Sexp, sc: &Scope) -> Result<Lin> {
    if let Some(a) = s.atom() {
        if let Ok(v) = a.parse::<i64>() {
            return Ok(Lin::constant(v));
        }
        if a == "n" {
            return Ok(Lin { nc: 1, ..Default::default() });
        }
        return Ok(Lin::param(sc.lookup(s, a)?));
    }
    let Some((h, args)) = s.head() else {
        return s.err("expected index expression");
    };
    match h {
        "+" if !args.is_empty() => {
            let mut acc = Lin::default();
            for a in args {
                acc = acc.add(&parse_lin(a, sc)?, 1);
            }
            Ok(acc)
        }
        "-" if args.len() == 1 => Ok(parse_lin(&args[0], sc)?.times(-1)),
        "-" if args.len() >= 2 => {
            let mut acc = parse_lin(&args[0], sc)?;
            for a in &args[1..] {
                acc = acc.add(&parse_lin(a, sc)?, -1);
            }
            Ok(acc)
        }
        "*" if args.len() == 2 => Ok(parse_lin(&args[1], sc)?.times(parse_int(&args[0])?)),
        _ => s.err(format!("bad index expression head '{h}'")),
    }
}

fn parse_pred(s: &Sexp, sc: &Scope) -> Result<Pred> {
    if let Some(a) = s.atom() {
        return match a {
            "true" => Ok(Pred::True),
            "false" => Ok(Pred::False),
            _ => s.err(format!("unknown predicate '{a}'")),
        };
    }
    let Some((h, args)) = s.head() else {
        return s.err("expected predicate");
    };
    let lin = |k: usize| parse_lin(&args[k], sc);
    let arity = |k: usize| -> Result<()> {
        if args.len() == k {
            Ok(())
        } else {
            s.err(format!("'{h}' takes {k} arguments"))
        }
    };
    match h {
        "even" => arity(1).and_then(|_| Ok(Pred::Even(lin(0)?))),
        "odd" => arity(1).and_then(|_| Ok(Pred::Odd(lin(0)?))),
        "eq" => arity(2).and_then(|_| Ok(Pred::Eq(lin(0)?, lin(1)?))),
        "ne" => arity(2).and_then(|_| Ok(Pred::Ne(lin(0)?, lin(1)?))),
        "lt" => arity(2).and_then(|_| Ok(Pred::Lt(lin(0)?, lin(1)?))),
        "le" => arity(2).and_then(|_| Ok(Pred::Le(lin(0)?, lin(1)?))),
        "cartan" => {
            arity(3)?;
            Ok(Pred::Cartan(lin(0)?, lin(1)?, parse_int(&args[2])?))
        }
        "tuplene" => {
            arity(2)?;
            let pair = |x: &Sexp| -> Result<(Lin, Lin)> {
                match x.list() {
                    Some([a, b]) => Ok((parse_lin(a, sc)?, parse_lin(b, sc)?)),
                    _ => x.err("expected a pair (e e)"),
                }
            };
            Ok(Pred::TupleNe(pair(&args[0])?, pair(&args[1])?))
        }
        "and" | "or" if !args.is_empty() => {
            let v = args.iter().map(|a| parse_pred(a, sc)).collect::<Result<Vec<_>>>()?;
            Ok(if h == "and" { Pred::And(v) } else { Pred::Or(v) })
        }
        "not" => arity(1).and_then(|_| Ok(Pred::Not(Box::new(parse_pred(&args[0], sc)?)))),
        _ => s.err(format!("unknown predicate '{h}'")),
    }
}

fn parse_coeff(s: &Sexp) -> Result<Coeff> {
    let Some(("c", args)) = s.head() else {
        return s.err("expected coefficient (c RAT ...)");
    };
    let Some(first) = args.first() else {
        return s.err("coefficient needs a rational");
    };
    let Some(rat) = first.atom().and_then(Rational::parse) else {
        return first.err("bad rational");
    };
    let mut c = Coeff { rat, hb: 0, nlin: None };
    for a in &args[1..] {
        match a.head() {
            Some(("hb", [k])) => {
                let k = parse_int(k)?;
                if k < 0 {
                    return a.err("negative power of hb");
                }
                c.hb = k as u32;
            }
            Some(("nlin", [x, y])) => c.nlin = Some((parse_int(x)?, parse_int(y)?)),
            _ => return a.err("expected (hb INT) or (nlin INT INT)"),
        }
    }
    Ok(c)
}

fn parse_int_term(s: &Sexp, sc: &Scope) -> Result<IntTerm> {
    match s.head() {
        Some(("a", [i, j])) => Ok(IntTerm::Cartan(parse_lin(i, sc)?, parse_lin(j, sc)?)),
        Some(("ar", [r, i, j])) => {
            Ok(IntTerm::CartanR(parse_lin(r, sc)?, parse_lin(i, sc)?, parse_lin(j, sc)?))
        }
        Some(("delta", [a, b])) => Ok(IntTerm::Delta(parse_lin(a, sc)?, parse_lin(b, sc)?)),
        _ => Ok(IntTerm::Lin(parse_lin(s, sc)?)),
    }
}

fn parse_expr(s: &Sexp, sc: &Scope) -> Result<Expr> {
    if let Some(a) = s.atom() {
        return if a == "0" { Ok(Expr::Zero) } else { s.err(format!("unexpected atom '{a}'")) };
    }
    let Some((h, args)) = s.head() else {
        return s.err("expected expression");
    };
    let sub = |k: usize| parse_expr(&args[k], sc).map(Box::new);
    let lin = |k: usize| parse_lin(&args[k], sc);
    let arity = |k: usize| -> Result<()> {
        if args.len() == k {
            Ok(())
        } else {
            s.err(format!("'{h}' takes {k} arguments"))
        }
    };
    match h {
        "H" | "X+" | "X-" => {
            arity(2)?;
            let kind = match h {
                "H" => GenKind::H,
                "X+" => GenKind::XPlus,
                _ => GenKind::XMinus,
            };
            Ok(Expr::Gen(GenSel::Fixed(kind), lin(0)?, lin(1)?))
        }
        "X" => {
            arity(3)?;
            let Some(name) = args[0].atom() else {
                return args[0].err("expected a pm parameter");
            };
            let p = sc.lookup(&args[0], name)?;
            if sc.names[p].kind != RangeKind::Pm {
                return args[0].err(format!("'{name}' is not a pm parameter"));
            }
            Ok(Expr::Gen(GenSel::Signed(p), lin(1)?, lin(2)?))
        }
        "lb" => arity(2).and_then(|_| Ok(Expr::Bracket(sub(0)?, sub(1)?))),
        "*" => arity(2).and_then(|_| Ok(Expr::Prod(sub(0)?, sub(1)?))),
        "+" if !args.is_empty() => {
            Ok(Expr::Sum(args.iter().map(|a| parse_expr(a, sc)).collect::<Result<Vec<_>>>()?))
        }
        "scal" => arity(2).and_then(|_| Ok(Expr::Scal(parse_coeff(&args[0])?, sub(1)?))),
        "sign" => arity(2).and_then(|_| Ok(Expr::Sign(lin(0)?, sub(1)?))),
        "mul" => arity(2).and_then(|_| Ok(Expr::Mul(parse_int_term(&args[0], sc)?, sub(1)?))),
        "when" => arity(2).and_then(|_| Ok(Expr::When(parse_pred(&args[0], sc)?, sub(1)?))),
        _ => {
            if let Some(f) = ChainFamily::from_label(h) {
                if f.is_diagonal() {
                    arity(2)?;
                    Ok(Expr::Chain(f, lin(0)?, lin(0)?, lin(1)?))
                } else {
                    arity(3)?;
                    Ok(Expr::Chain(f, lin(0)?, lin(1)?, lin(2)?))
                }
            } else {
                s.err(format!("unknown generator or operator '{h}'"))
            }
        }
    }
}

fn parse_params(s: &Sexp) -> Result<Vec<Param>> {
    let Some(items) = s.list() else {
        return s.err("expected parameter list");
    };
    let mut params: Vec<Param> = Vec::new();
    for it in items {
        let Some([name, kind]) = it.list() else {
            return it.err("expected (NAME kind)");
        };
        let Some(name) = name.atom() else {
            return name.err("expected parameter name");
        };
        if RESERVED.contains(&name) || name.parse::<i64>().is_ok() {
            return it.err(format!("reserved parameter name '{name}'"));
        }
        if params.iter().any(|p| p.name == name) {
            return it.err(format!("duplicate parameter '{name}'"));
        }
        let kind = match kind.atom() {
            Some("node") => RangeKind::Node,
            Some("mode") => RangeKind::Mode,
            Some("pm") => RangeKind::Pm,
            _ => match kind.head() {
                Some(("range", [lo, hi])) => {
                    let sc = Scope { names: &params };
                    RangeKind::Range(parse_lin(lo, &sc)?, parse_lin(hi, &sc)?)
                }
                _ => return kind.err("expected node, mode, pm or (range lo hi)"),
            },
        };
        params.push(Param { name: name.to_string(), kind });
    }
    Ok(params)
}

fn parse_entry(s: &Sexp) -> Result<CatalogEntry> {
    let Some((h, args)) = s.head() else {
        return s.err("expected (relation ...) entry");
    };
    if h == "unstated" {
        return match args {
            [Sexp::Atom(id, ..), Sexp::Str(reason, ..)] => {
                Ok(CatalogEntry::Unstated { id: id.clone(), reason: reason.clone() })
            }
            _ => s.err("expected (unstated ID \"reason\")"),
        };
    }
    if h != "relation" {
        return s.err(format!("unknown entry kind '{h}'"));
    }
    if args.len() < 3 {
        return s.err("relation needs an id, parameters and an equation");
    }
    let Some(id) = args[0].atom() else {
        return args[0].err("expected relation id");
    };
    let params = parse_params(&args[1])?;
    let sc = Scope { names: &params };
    let mut level = Level::Lie;
    let mut informational = false;
    let mut guard = Pred::True;
    let mut equation: Option<(Expr, Expr)> = None;
    for a in &args[2..] {
        match a.head() {
            Some(("level", [l])) => {
                level = match l.atom() {
                    Some("lie") => Level::Lie,
                    Some("assoc") => Level::Assoc,
                    _ => return l.err("level must be lie or assoc"),
                }
            }
            Some(("tag", [t])) if t.atom() == Some("informational") => informational = true,
            Some(("guard", [p])) => guard = parse_pred(p, &sc)?,
            Some(("=", [l, r])) => {
                if equation.is_some() {
                    return a.err("duplicate equation");
                }
                equation = Some((parse_expr(l, &sc)?, parse_expr(r, &sc)?));
            }
            _ => return a.err("expected (level ..), (tag ..), (guard ..) or (= lhs rhs)"),
        }
    }
    let Some((lhs, rhs)) = equation else {
        return s.err("relation without equation");
    };
    let schema = RelationSchema { id: id.to_string(), params, level, informational, guard, lhs, rhs };
    if schema.level == Level::Lie && (schema.lhs.has_prod() || schema.rhs.has_prod()) {
        return s.err(format!("relation '{id}': products are not allowed at level lie"));
    }
    Ok(CatalogEntry::Relation(schema))
}

pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut out: Vec<CatalogEntry> = Vec::new();
    for s in read_sexps(text)? {
        let e = parse_entry(&s)?;
        if out.iter().any(|o| o.id() == e.id()) {
            return s.err(format!("duplicate relation id '{}'", e.id()));
        }
        out.push(e);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Rendering (canonical; parse(render(x)) == x)

fn render_lin(l: &Lin, params: &[Param]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let push = |parts: &mut Vec<String>, name: &str, k: i64| match k {
        1 => parts.push(name.to_string()),
        -1 => parts.push(format!("(- {name})")),
        _ => parts.push(format!("(* {k} {name})")),
    };
    for (p, k) in &l.terms {
        push(&mut parts, &params[*p].name, *k);
    }
    if l.nc != 0 {
        push(&mut parts, "n", l.nc);
    }
    if l.c != 0 || parts.is_empty() {
        parts.push(l.c.to_string());
    }
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        format!("(+ {})", parts.join(" "))
    }
}

fn render_pred(p: &Pred, ps: &[Param]) -> String {
    let l = |x: &Lin| render_lin(x, ps);
    match p {
        Pred::True => "true".into(),
        Pred::False => "false".into(),
        Pred::Even(a) => format!("(even {})", l(a)),
        Pred::Odd(a) => format!("(odd {})", l(a)),
        Pred::Eq(a, b) => format!("(eq {} {})", l(a), l(b)),
        Pred::Ne(a, b) => format!("(ne {} {})", l(a), l(b)),
        Pred::Lt(a, b) => format!("(lt {} {})", l(a), l(b)),
        Pred::Le(a, b) => format!("(le {} {})", l(a), l(b)),
        Pred::TupleNe((a, b), (c, d)) => format!("(tuplene ({} {}) ({} {}))", l(a), l(b), l(c), l(d)),
        Pred::Cartan(a, b, v) => format!("(cartan {} {} {v})", l(a), l(b)),
        Pred::And(v) => format!("(and {})", v.iter().map(|x| render_pred(x, ps)).collect::<Vec<_>>().join(" ")),
        Pred::Or(v) => format!("(or {})", v.iter().map(|x| render_pred(x, ps)).collect::<Vec<_>>().join(" ")),
        Pred::Not(x) => format!("(not {})", render_pred(x, ps)),
    }
}

fn render_expr(e: &Expr, ps: &[Param]) -> String {
    let l = |x: &Lin| render_lin(x, ps);
    match e {
        Expr::Zero => "0".into(),
        Expr::Gen(GenSel::Fixed(k), i, r) => format!("({} {} {})", k.label(), l(i), l(r)),
        Expr::Gen(GenSel::Signed(p), i, r) => format!("(X {} {} {})", ps[*p].name, l(i), l(r)),
        Expr::Chain(f, i, j, r) => {
            if f.is_diagonal() {
                format!("({} {} {})", f.label(), l(i), l(r))
            } else {
                format!("({} {} {} {})", f.label(), l(i), l(j), l(r))
            }
        }
        Expr::Bracket(a, b) => format!("(lb {} {})", render_expr(a, ps), render_expr(b, ps)),
        Expr::Prod(a, b) => format!("(* {} {})", render_expr(a, ps), render_expr(b, ps)),
        Expr::Sum(v) => format!("(+ {})", v.iter().map(|x| render_expr(x, ps)).collect::<Vec<_>>().join(" ")),
        Expr::Scal(c, x) => {
            let mut s = format!("(scal (c {}", c.rat);
            if c.hb != 0 {
                let _ = write!(s, " (hb {})", c.hb);
            }
            if let Some((a, b)) = c.nlin {
                let _ = write!(s, " (nlin {a} {b})");
            }
            let _ = write!(s, ") {})", render_expr(x, ps));
            s
        }
        Expr::Sign(a, x) => format!("(sign {} {})", l(a), render_expr(x, ps)),
        Expr::Mul(k, x) => {
            let kt = match k {
                IntTerm::Lin(a) => l(a),
                IntTerm::Cartan(a, b) => format!("(a {} {})", l(a), l(b)),
                IntTerm::CartanR(r, a, b) => format!("(ar {} {} {})", l(r), l(a), l(b)),
                IntTerm::Delta(a, b) => format!("(delta {} {})", l(a), l(b)),
            };
            format!("(mul {kt} {})", render_expr(x, ps))
        }
        Expr::When(p, x) => format!("(when {} {})", render_pred(p, ps), render_expr(x, ps)),
    }
}

pub fn render_schema(s: &RelationSchema) -> String {
    let ps = &s.params;
    let mut out = format!("(relation {} (", s.id);
    for (k, p) in ps.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        let kind = match &p.kind {
            RangeKind::Node => "node".to_string(),
            RangeKind::Mode => "mode".to_string(),
            RangeKind::Pm => "pm".to_string(),
            RangeKind::Range(a, b) => format!("(range {} {})", render_lin(a, &ps[..k]), render_lin(b, &ps[..k])),
        };
        let _ = write!(out, "({} {kind})", p.name);
    }
    out.push(')');
    if s.level == Level::Assoc {
        out.push_str(" (level assoc)");
    }
    if s.informational {
        out.push_str(" (tag informational)");
    }
    if s.guard != Pred::True {
        let _ = write!(out, " (guard {})", render_pred(&s.guard, ps));
    }
    let _ = write!(out, " (= {} {}))", render_expr(&s.lhs, ps), render_expr(&s.rhs, ps));
    out
}

pub fn render_entry(e: &CatalogEntry) -> String {
    match e {
        CatalogEntry::Relation(s) => render_schema(s),
        CatalogEntry::Unstated { id, reason } => format!("(unstated {id} \"{reason}\")"),
    }
}

impl fmt::Display for RelationSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_schema(self))
    }
}

/// Range parameters may only refer to earlier parameters.
pub(crate) fn range_is_causal(params: &[Param]) -> bool {
    params.iter().enumerate().all(|(k, p)| match &p.kind {
        RangeKind::Range(a, b) => [a, b].iter().all(|l| l.max_param().is_none_or(|m| m < k)),
        _ => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(text: &str) -> RelationSchema {
        match parse_catalog(text).unwrap().remove(0) {
            CatalogEntry::Relation(s) => s,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_commuting_cartan_relation() {
        let s = one("(relation hh ((i node)(j node)(r mode)(s mode)) (guard true) (= (lb (H i r) (H j s)) 0))");
        assert_eq!(s.params.len(), 4);
        assert_eq!(s.level, Level::Lie);
        assert_eq!(s.rhs, Expr::Zero);
    }

    #[test]
    fn malformed_input_reports_position() {
        match parse_catalog("\n  (relation") {
            Err(TydError::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_catalog("(relation x ((i node)) (= (Q i 0) 0))"), Err(TydError::Parse { .. })));
        assert!(matches!(parse_catalog("(relation x ((i node)) (= (H k 0) 0))"), Err(TydError::Parse { .. })));
    }

    #[test]
    fn products_rejected_at_lie_level() {
        let text = "(relation x ((i node)) (= (* (H i 0) (H i 0)) 0))";
        assert!(parse_catalog(text).is_err());
        let ok = "(relation x ((i node)) (level assoc) (= (* (H i 0) (H i 0)) 0))";
        assert!(parse_catalog(ok).is_ok());
    }

    #[test]
    fn duplicate_ids_rejected() {
        let text = "(relation x ((i node)) (= 0 0)) (relation x ((i node)) (= 0 0))";
        assert!(parse_catalog(text).is_err());
    }

    #[test]
    fn linear_expressions_normalize() {
        let s = one("(relation x ((r mode)(s mode)) (= (H 1 (+ r s 1)) (H (- n 1) (- (* 2 r) r))))");
        let Expr::Gen(_, _, m) = &s.lhs else { panic!() };
        assert_eq!(m.eval(&[2, 3], 5), 6);
        let Expr::Gen(_, i, m) = &s.rhs else { panic!() };
        assert_eq!(i.eval(&[0, 0], 5), 4);
        assert_eq!(m.eval(&[7, 0], 5), 7);
    }

    #[test]
    fn render_round_trip() {
        let text = r#"
            (relation a1 ((i node)(j (range (+ i 1) n))(r mode)(e pm)) (tag informational)
              (guard (and (cartan i j -1) (or (even (+ r 1)) (tuplene (i j) ((- n 1) n)))))
              (= (lb (X e i r) (Xm i j r)) (+ (scal (c -1/2 (hb 2) (nlin 4 -4)) (Yd i 1))
                                             (mul (ar r i j) (sign r (when (lt i j) (X- j 0)))))))
            (unstated u1 "no bound index")
        "#;
        for e in parse_catalog(text).unwrap() {
            let again = parse_catalog(&render_entry(&e)).unwrap().remove(0);
            assert_eq!(again, e);
        }
    }
}
