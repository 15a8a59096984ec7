void ok_wrapper_release_do(int *x) {
    free(x);
}
int ok_wrapper_release() {
    int *p = malloc(4);
    ok_wrapper_release_do(p);
    return 0;
}
