use std::hash::Hash;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};

use lru::LruCache;
use tokio::sync::OnceCell;

/// LRU cache whose entries are filled at most once. The map lock is only
/// held to look up the slot; concurrent requests for the same key wait on
/// that key's fill, other keys proceed. Failed fills are not cached.
pub struct FillCache<K, V> {
    slots: Mutex<LruCache<K, Arc<OnceCell<Arc<V>>>>>,
}

impl<K: Hash + Eq + Clone, V> FillCache<K, V> {
    pub fn new(capacity: usize) -> Self {
        let cap = NonZeroUsize::new(capacity.max(1)).unwrap();
        Self {
            slots: Mutex::new(LruCache::new(cap)),
        }
    }

    pub async fn get_or_try_fill<E, F, Fut>(&self, key: K, fill: F) -> Result<Arc<V>, E>
    where
        F: FnOnce() -> Fut,
        Fut: std::future::Future<Output = Result<V, E>>,
    {
        let slot = {
            let mut slots = self.slots.lock().unwrap();
            slots
                .get_or_insert(key, || Arc::new(OnceCell::new()))
                .clone()
        };
        slot.get_or_try_init(|| async { fill().await.map(Arc::new) })
            .await
            .cloned()
    }

    pub fn len(&self) -> usize {
        self.slots.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
