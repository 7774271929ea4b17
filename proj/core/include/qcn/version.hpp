#ifndef QCN_VERSION_HPP
#define QCN_VERSION_HPP

#define QCN_VERSION "0.1.0"

#endif
