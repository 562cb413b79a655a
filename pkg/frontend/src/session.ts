// Client session: owner name, bearer token, API base URL. Persisted in
// localStorage when available so a reload stays signed in.

export interface ClientSession {
  owner: string;
  token: string;
  baseUrl: string;
}

const STORAGE_KEY = "pkgraph.session";

interface StringStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

function defaultStore(): StringStore {
  try {
    if (typeof localStorage !== "undefined") return localStorage;
  } catch {
    // storage blocked: fall through to the in-memory store
  }
  const memory = new Map<string, string>();
  return {
    getItem: (key) => memory.get(key) ?? null,
    setItem: (key, value) => void memory.set(key, value),
    removeItem: (key) => void memory.delete(key),
  };
}

export class SessionStore {
  private store: StringStore;

  constructor(store?: StringStore) {
    this.store = store ?? defaultStore();
  }

  load(): ClientSession | null {
    const raw = this.store.getItem(STORAGE_KEY);
    if (raw === null) return null;
    try {
      const parsed = JSON.parse(raw) as Partial<ClientSession>;
      if (parsed.owner && parsed.token && parsed.baseUrl) {
        return { owner: parsed.owner, token: parsed.token, baseUrl: parsed.baseUrl };
      }
    } catch {
      this.store.removeItem(STORAGE_KEY);
    }
    return null;
  }

  save(session: ClientSession): void {
    this.store.setItem(STORAGE_KEY, JSON.stringify(session));
  }

  clear(): void {
    this.store.removeItem(STORAGE_KEY);
  }
}
