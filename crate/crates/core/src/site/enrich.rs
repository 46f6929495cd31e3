use std::sync::Arc;

use super::cat::FiniteCat;
use super::presheaf::{presheaf_homs, Presheaf, PresheafMap};
use crate::scomplex::{
    product, realize, realize_map, Realized, simplex_of_vertices, standard, Closure, Product, SMap, SSet, Simplex,
    SimplicialObject,
};
use crate::{Budget, Result};

/// `δ^i : Δ^{n-1} → Δ^n`.
pub(crate) fn coface_map(n: usize, i: usize) -> SMap {
    let (a, b) = (Arc::new(standard(n - 1)), Arc::new(standard(n)));
    simplex_map(&a, &b, n, |v| if v < i { v } else { v + 1 })
}

/// `σ^j : Δ^{n+1} → Δ^n`.
pub(crate) fn codegeneracy_map(n: usize, j: usize) -> SMap {
    let (a, b) = (Arc::new(standard(n + 1)), Arc::new(standard(n)));
    simplex_map(&a, &b, n, |v| if v <= j { v } else { v - 1 })
}

fn simplex_map(a: &Arc<SSet>, b: &Arc<SSet>, n: usize, on_vertices: impl Fn(usize) -> usize) -> SMap {
    SMap::from_fn(a.clone(), b.clone(), |c| {
        let vs: Vec<usize> = a
            .vertices_of(&Simplex::nondegenerate(c))
            .iter()
            .map(|v| on_vertices(v.index))
            .collect();
        Ok(simplex_of_vertices(b, &vs, n))
    })
    .expect("monotone maps are simplicial")
}

fn top_dim(x: &SSet) -> usize {
    if x.is_empty() {
        0
    } else {
        x.top_dim()
    }
}

fn product_map(p: &Product, q: &Product, f: Option<&SMap>, g: Option<&SMap>) -> Result<SMap> {
    realize_map(&p.realized, &q.realized, |_, (a, b)| {
        (
            f.map_or_else(|| a.clone(), |f| f.apply(a)),
            g.map_or_else(|| b.clone(), |g| g.apply(b)),
        )
    })
}

/// `(X ⊗ K)(U) = X(U) × K`.
pub fn tensor(x: &Presheaf, k: &Arc<SSet>, budget: &Budget) -> Result<Presheaf> {
    Ok(tensor_with_products(x, k, 0, budget)?.0)
}

/// `extra` enumerates the products beyond their top dimension, so that
/// maps into them from higher tensors find their degenerate images.
fn tensor_with_products(x: &Presheaf, k: &Arc<SSet>, extra: usize, budget: &Budget) -> Result<(Presheaf, Vec<Product>)> {
    let site = x.site().clone();
    let products = x
        .sections()
        .iter()
        .map(|s| product(s, k, top_dim(s) + top_dim(k) + extra, budget))
        .collect::<Result<Vec<_>>>()?;
    let sections = products.iter().map(|p| p.sset().clone()).collect();
    let t = Presheaf::new(&format!("{}⊗{}", x.name(), k.name()), site.clone(), sections, |a| {
        let arr = &site.arrows()[a];
        product_map(&products[arr.tgt], &products[arr.src], Some(x.restriction(a)), None)
    })?;
    Ok((t, products))
}

fn tensor_map(
    x: &Presheaf,
    a: &(Arc<Presheaf>, Vec<Product>),
    b: &(Arc<Presheaf>, Vec<Product>),
    g: &SMap,
) -> Result<PresheafMap> {
    let components = (0..x.site().objects().len())
        .map(|u| product_map(&a.1[u], &b.1[u], None, Some(g)))
        .collect::<Result<Vec<_>>>()?;
    PresheafMap::new(a.0.clone(), b.0.clone(), components)
}

/// The simplicial set `map(X, Y)` with `map(X, Y)_n = Hom(X ⊗ Δ^n, Y)`.
struct MapSpace<'a> {
    y: &'a Arc<Presheaf>,
    tensors: Vec<(Arc<Presheaf>, Vec<Product>)>,
    cofaces: Vec<Vec<PresheafMap>>,
    codegeneracies: Vec<Vec<PresheafMap>>,
}

/// Per object, per dimension, per cell: the image simplex.
type Components = Vec<Vec<Vec<Simplex>>>;

fn components_of(m: &PresheafMap) -> Components {
    m.components
        .iter()
        .map(|c| {
            let s = c.source();
            (0..s.cell_counts().len())
                .map(|d| s.cells(d).map(|cell| c.image_of_cell(cell).clone()).collect())
                .collect()
        })
        .collect()
}

impl MapSpace<'_> {
    fn precompose(&self, e: &Components, along: &PresheafMap) -> Components {
        along
            .components
            .iter()
            .enumerate()
            .map(|(u, c)| {
                let s = c.source();
                (0..s.cell_counts().len())
                    .map(|d| {
                        s.cells(d)
                            .map(|cell| {
                                let img = c.image_of_cell(cell);
                                let base = &e[u][img.cell().dim][img.cell().index];
                                let theta: Vec<usize> = img.surj.iter().map(|&v| v as usize).collect();
                                self.y.at(u).apply(base, &theta)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

impl SimplicialObject for MapSpace<'_> {
    type Elem = Components;

    fn elements(&self, dim: usize, budget: &Budget) -> Result<Vec<Components>> {
        Ok(presheaf_homs(&self.tensors[dim].0, self.y, budget)?
            .iter()
            .map(components_of)
            .collect())
    }

    fn face(&self, dim: usize, i: usize, e: &Components) -> Components {
        self.precompose(e, &self.cofaces[dim][i])
    }

    fn degeneracy(&self, dim: usize, j: usize, e: &Components) -> Components {
        self.precompose(e, &self.codegeneracies[dim][j])
    }

    fn label(&self, _dim: usize, e: &Components) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .map(|(u, c)| {
                let y = self.y.at(u);
                let imgs: Vec<String> = c.iter().flatten().map(|s| y.label(s).replace(' ', "")).collect();
                imgs.join(",")
            })
            .collect();
        format!("[{}]", parts.join("|"))
    }
}

/// `map(X, Y)` up to `max_dim`, enumerated exhaustively.
pub fn mapping_space(x: &Arc<Presheaf>, y: &Arc<Presheaf>, max_dim: usize, budget: &Budget) -> Result<Arc<SSet>> {
    Ok(mapping_realized(x, y, max_dim, budget)?.sset)
}

fn mapping_realized(
    x: &Arc<Presheaf>,
    y: &Arc<Presheaf>,
    max_dim: usize,
    budget: &Budget,
) -> Result<Realized<Components>> {
    budget.check_dim(max_dim)?;
    let tensors = (0..=max_dim + 1)
        .map(|n| {
            let (t, p) = tensor_with_products(x, &Arc::new(standard(n)), max_dim + 1 - n, budget)?;
            Ok((Arc::new(t), p))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cofaces = vec![Vec::new()];
    let mut codegeneracies = Vec::new();
    for n in 0..=max_dim {
        if n > 0 {
            cofaces.push(
                (0..=n)
                    .map(|i| tensor_map(x, &tensors[n - 1], &tensors[n], &coface_map(n, i)))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        codegeneracies.push(
            (0..=n)
                .map(|j| tensor_map(x, &tensors[n + 1], &tensors[n], &codegeneracy_map(n, j)))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let obj = MapSpace {
        y,
        tensors,
        cofaces,
        codegeneracies,
    };
    let name = format!("map({},{})", x.name(), y.name());
    realize(&name, &obj, max_dim, Closure::Strict, budget)
}

/// `hom(K, X)(U) = map(K, X(U))`.
pub fn cotensor(k: &Arc<SSet>, x: &Presheaf, max_dim: usize, budget: &Budget) -> Result<Presheaf> {
    let point = Arc::new(FiniteCat::point());
    let ck = Arc::new(Presheaf::constant(&point, k));
    let spaces = x
        .sections()
        .iter()
        .map(|s| mapping_realized(&ck, &Arc::new(Presheaf::constant(&point, s)), max_dim, budget))
        .collect::<Result<Vec<_>>>()?;
    let site = x.site().clone();
    let sections = spaces.iter().map(|r| r.sset.clone()).collect();
    Presheaf::new(&format!("{}^{}", x.name(), k.name()), site.clone(), sections, |a| {
        let arr = &site.arrows()[a];
        let r = x.restriction(a);
        realize_map(&spaces[arr.tgt], &spaces[arr.src], |_, e| {
            e.iter()
                .map(|dims| dims.iter().map(|row| row.iter().map(|s| r.apply(s)).collect()).collect())
                .collect()
        })
    })
}
