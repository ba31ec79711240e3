//! Naive reference interpreter for merges, written against plain vectors and
//! sharing no code with the engine beyond the data types and the catalog
//! definitions it reads.

use procline::catalog::{OperationCatalog, OperationExemplar, TargetKind};
use procline::merge::ExtensionModel;
use procline::model::{ElementKind, MetamodelVersion, ProcessElement, ProcessModel, Reference, ReferenceKind};

#[derive(Clone, Debug)]
pub struct Naive {
    pub metamodel: MetamodelVersion,
    pub elements: Vec<ProcessElement>,
    pub references: Vec<Reference>,
}

type Step = (String, String, Vec<(String, String)>);

impl Naive {
    pub fn from_model(m: &ProcessModel) -> Self {
        Naive {
            metamodel: m.metamodel(),
            elements: m.elements().cloned().collect(),
            references: m.references().cloned().collect(),
        }
    }

    pub fn into_model(self) -> ProcessModel {
        let mut b = ProcessModel::builder(self.metamodel);
        for e in self.elements {
            b = b.element(e);
        }
        for r in self.references {
            b = b.reference(r);
        }
        b.build().expect("oracle keeps ids unique")
    }

    fn element(&self, id: &str) -> Option<&ProcessElement> {
        self.elements.iter().find(|e| e.id == id)
    }

    fn element_mut(&mut self, id: &str) -> Option<&mut ProcessElement> {
        self.elements.iter_mut().find(|e| e.id == id)
    }

    fn reference(&self, id: &str) -> Option<&Reference> {
        self.references.iter().find(|r| r.id == id)
    }

    fn has(&self, id: &str) -> bool {
        self.element(id).is_some() || self.reference(id).is_some()
    }

    fn consistent(&self) -> bool {
        self.references.iter().all(|r| {
            self.element(&r.id).is_none()
                && match (self.element(&r.source), self.element(&r.target)) {
                    (Some(s), Some(t)) => admits(r.kind, s.kind, t.kind),
                    _ => false,
                }
        })
    }

    fn remove_element(&mut self, id: &str) {
        self.elements.retain(|e| e.id != id);
        self.references.retain(|r| r.source != id && r.target != id);
    }

    fn endpoints_ok(&self, kind: ReferenceKind, source: &str, target: &str) -> bool {
        match (self.element(source), self.element(target)) {
            (Some(s), Some(t)) => admits(kind, s.kind, t.kind),
            _ => false,
        }
    }

    /// Applies one atomic step; `None` when any precondition fails.
    pub fn step(&mut self, kind: &str, target: &str, args: &[(String, String)]) -> Option<()> {
        let get = |name: &str| args.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str()).filter(|v| !v.is_empty());
        let allowed: &[&str] = match kind {
            "RenameElement" => &["newName"],
            "ReplaceText" => &["field", "text"],
            "AddText" => &["field", "position", "text"],
            "SwapReferences" => &["newTarget", "newSource"],
            "RemoveElement" | "RemoveReference" => &[],
            "AddReference" => &["referenceId", "referenceKind", "referenceTarget"],
            "ChangeAttribute" => &["key", "value"],
            "MoveElement" => &["newOrderingNumber"],
            _ => return None,
        };
        if args.iter().any(|(k, _)| !allowed.contains(&k.as_str())) {
            return None;
        }
        if kind != "SwapReferences" && allowed.iter().any(|a| get(a).is_none()) {
            return None;
        }
        if !self.has(target) {
            return None;
        }
        match kind {
            "RenameElement" => {
                let name = get("newName")?.to_string();
                self.element_mut(target)?.name = name;
            }
            "ReplaceText" | "AddText" => {
                let text = get("text")?.to_string();
                let position = get("position");
                if kind == "AddText" && !matches!(position, Some("prefix" | "postfix")) {
                    return None;
                }
                let field = get("field")?.to_string();
                let e = self.element_mut(target)?;
                let slot: &mut String = if field == "description" {
                    &mut e.description
                } else if let Some(block) = inner(&field, "textBlock(") {
                    &mut e.text_blocks.iter_mut().find(|b| b.id == block)?.text
                } else {
                    e.attributes.get_mut(inner(&field, "attribute(")?)?
                };
                *slot = match position {
                    None => text,
                    Some("prefix") => format!("{text}{slot}"),
                    Some(_) => format!("{slot}{text}"),
                };
            }
            "SwapReferences" => {
                let r = self.reference(target)?.clone();
                let (ns, nt) = (get("newSource"), get("newTarget"));
                if ns.is_none() && nt.is_none() {
                    return None;
                }
                let source = ns.unwrap_or(&r.source).to_string();
                let dest = nt.unwrap_or(&r.target).to_string();
                if !self.endpoints_ok(r.kind, &source, &dest) {
                    return None;
                }
                let r = self.references.iter_mut().find(|x| x.id == target)?;
                r.source = source;
                r.target = dest;
            }
            "RemoveElement" => {
                self.element(target)?;
                self.remove_element(target);
            }
            "RemoveReference" => {
                self.reference(target)?;
                self.references.retain(|r| r.id != target);
            }
            "AddReference" => {
                self.element(target)?;
                let id = get("referenceId")?;
                let rk: ReferenceKind = get("referenceKind")?.parse().ok()?;
                let dest = get("referenceTarget")?;
                if self.has(id) || !self.endpoints_ok(rk, target, dest) {
                    return None;
                }
                self.references.push(Reference::new(id, rk, target, dest));
            }
            "ChangeAttribute" => {
                let (key, value) = (get("key")?.to_string(), get("value")?.to_string());
                if let Some(e) = self.element_mut(target) {
                    e.attributes.insert(key, value);
                } else {
                    let r = self.references.iter_mut().find(|x| x.id == target)?;
                    r.attributes.insert(key, value);
                }
            }
            "MoveElement" => {
                let number = get("newOrderingNumber")?;
                let dotted = number.split('.').all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()));
                if !dotted {
                    return None;
                }
                self.element_mut(target)?.attributes.insert("orderingNumber".into(), number.into());
            }
            _ => return None,
        }
        Some(())
    }
}

fn inner<'a>(field: &'a str, prefix: &str) -> Option<&'a str> {
    field.strip_prefix(prefix)?.strip_suffix(')').filter(|s| !s.is_empty())
}

/// Independent restatement of the reference kind constraints.
pub fn admits(kind: ReferenceKind, s: ElementKind, t: ElementKind) -> bool {
    use ElementKind as E;
    use ReferenceKind as R;
    match kind {
        R::Responsibility | R::SupportingRole => s == E::WorkProduct && t == E::Role,
        R::TopicAssignment => s == E::WorkProduct && t == E::Topic,
        R::CreatingDependency => s == E::WorkProduct && t == E::WorkProduct,
        R::TailoringDependency => s == E::ProcessModule && t == E::ProcessModule,
        R::ModuleContainment => {
            s == E::ProcessModule
                && matches!(
                    t,
                    E::Discipline
                        | E::WorkProduct
                        | E::Topic
                        | E::SubTopic
                        | E::Activity
                        | E::Task
                        | E::Role
                        | E::DecisionGate
                )
        }
        R::ConfigurationEntry => s == E::ProjectTypeVariant && t == E::ProcessModule,
        R::LiteratureLink => t == E::LiteratureReference,
        R::MethodLink => t == E::MethodReference,
        R::ToolLink => t == E::ToolReference,
        R::MappingLink => s == E::MappingEntry,
    }
}

fn fill(template: &str, bindings: &[(String, String)]) -> Option<String> {
    let mut out = template.to_string();
    let mut sorted: Vec<&(String, String)> = bindings.iter().collect();
    sorted.sort_by_key(|(k, _)| std::cmp::Reverse(k.len()));
    for (k, v) in sorted {
        out = out.replace(&format!("${k}"), v);
    }
    (!out.contains('$')).then_some(out)
}

fn expand(catalog: &OperationCatalog, ex: &OperationExemplar) -> Option<Vec<Step>> {
    let def = catalog.get(&ex.type_name)?;
    let mut bindings = vec![("target".to_string(), ex.target.clone())];
    for p in &def.params {
        bindings.push((p.clone(), ex.args.get(p).filter(|v| !v.is_empty())?.clone()));
    }
    def.recipe
        .iter()
        .map(|t| {
            let args =
                t.args.iter().map(|(k, v)| Some((k.clone(), fill(v, &bindings)?))).collect::<Option<Vec<_>>>()?;
            Some((t.kind.to_string(), fill(&t.target, &bindings)?, args))
        })
        .collect()
}

fn exemplar_ok(catalog: &OperationCatalog, m: &Naive, ex: &OperationExemplar) -> Option<Vec<Step>> {
    let def = catalog.get(&ex.type_name)?;
    if def.metamodel > m.metamodel {
        return None;
    }
    let actual = match (m.element(&ex.target), m.reference(&ex.target)) {
        (Some(e), _) => TargetKind::Element(e.kind),
        (None, Some(r)) => TargetKind::Reference(r.kind),
        _ => return None,
    };
    if actual != def.target_kind || ex.args.keys().any(|k| !def.params.contains(k)) {
        return None;
    }
    let steps = expand(catalog, ex)?;
    let mut scratch = m.clone();
    for (kind, target, args) in &steps {
        scratch.step(kind, target, args)?;
    }
    Some(steps)
}

fn replaced_fields(steps: &[Step]) -> Vec<(String, String)> {
    steps
        .iter()
        .filter(|(k, _, _)| k == "ReplaceText")
        .filter_map(|(_, t, args)| args.iter().find(|(k, _)| k == "field").map(|(_, f)| (t.clone(), f.clone())))
        .collect()
}

/// Merges one extension phase by phase; `None` wherever the engine must
/// refuse.
pub fn merge(
    base: &ProcessModel,
    ext: &ExtensionModel,
    catalog: &OperationCatalog,
    last_wins: bool,
) -> Option<ProcessModel> {
    let mut m = Naive::from_model(base);

    // integrate
    if ext.metamodel < m.metamodel {
        return None;
    }
    let mut seen: Vec<&str> = Vec::new();
    for id in ext.new_elements.iter().map(|e| e.id.as_str()).chain(ext.new_references.iter().map(|r| r.id.as_str())) {
        if id.is_empty() || m.has(id) || seen.contains(&id) {
            return None;
        }
        seen.push(id);
    }
    if ext.new_elements.iter().any(|e| e.name.is_empty()) {
        return None;
    }
    m.metamodel = m.metamodel.max(ext.metamodel);
    m.elements.extend(ext.new_elements.iter().cloned());
    m.references.extend(ext.new_references.iter().cloned());

    // exclude
    if ext.exclusions.iter().any(|id| !m.has(id)) {
        return None;
    }
    for id in &ext.exclusions {
        if m.element(id).is_some() {
            m.remove_element(id);
        } else {
            m.references.retain(|r| &r.id != id);
        }
    }
    if !m.consistent() {
        return None;
    }

    // operate
    let mut expanded = Vec::new();
    for ex in &ext.exemplars {
        expanded.push(exemplar_ok(catalog, &m, ex)?);
    }
    if !last_wins {
        for i in 0..expanded.len() {
            for j in 0..i {
                let earlier = replaced_fields(&expanded[j]);
                if replaced_fields(&expanded[i]).iter().any(|f| earlier.contains(f)) {
                    return None;
                }
            }
        }
    }
    for steps in &expanded {
        for (kind, target, args) in steps {
            m.step(kind, target, args)?;
        }
    }
    m.consistent().then(|| m.into_model())
}
