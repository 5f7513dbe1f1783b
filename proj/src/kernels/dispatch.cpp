#include "irsim/kernels.hpp"

namespace irsim::kernels {

const KernelTable* avx2_table_impl();

namespace {

struct Dispatch {
  const KernelTable* table;
  Backend backend;
  Dispatch() {
    if (const KernelTable* t = avx2_table_impl()) {
      table = t;
      backend = Backend::avx2;
    } else {
      table = &scalar_table();
      backend = Backend::scalar;
    }
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

const KernelTable* avx2_table() { return avx2_table_impl(); }

const KernelTable& active() { return *dispatch().table; }

Backend active_backend() { return dispatch().backend; }

bool select(Backend b) {
  switch (b) {
    case Backend::scalar:
      dispatch().table = &scalar_table();
      dispatch().backend = Backend::scalar;
      return true;
    case Backend::avx2:
      if (const KernelTable* t = avx2_table_impl()) {
        dispatch().table = t;
        dispatch().backend = Backend::avx2;
        return true;
      }
      return false;
  }
  return false;
}

}  // namespace irsim::kernels
